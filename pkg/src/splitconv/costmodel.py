"""Analytic operation counts for spatial, whole-image FFT, overlap-add and split convolution.

The formulas are evaluated as written: real division for the patch count,
base-2 logarithms, ``log(x)^2`` read as ``log2(x**2)``, and no rounding.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass


class Method(enum.Enum):
    SPATIAL = "spatial"
    FULL_FFT = "full_fft"
    OAA = "oaa"
    SPLIT = "split"


@dataclass(frozen=True)
class CostRow:
    method: Method
    N: int
    k: int
    s: int | None
    mults: float
    adds: float
    storage_elems: float
    access_note: str = ""

    @property
    def total(self) -> float:
        return self.mults + self.adds


def _positive(**params):
    for name, value in params.items():
        if not value >= 1:
            raise ValueError(f"{name} must be >= 1, got {value}")


def _transform_term(side: float) -> float:
    # two 2-D transforms (forward + inverse) of side x side points
    return 2 * side ** 2 * math.log2(side ** 2)


def mul_oaa(N, k) -> float:
    _positive(N=N, k=k)
    span = 2 * k - 1
    return (N ** 2 / k ** 2) * (_transform_term(span) + span ** 2)


def add_oaa(N, k) -> float:
    _positive(N=N, k=k)
    span = 2 * k - 1
    return (N ** 2 / k ** 2) * (_transform_term(span) + k ** 2 - k)


def mul_split(N, s, k) -> float:
    _positive(N=N, s=s, k=k)
    side = s + k - 1
    return (N ** 2 / s ** 2) * (_transform_term(side) + side ** 2)


def add_split(N, s, k) -> float:
    _positive(N=N, s=s, k=k)
    side = s + k - 1
    return (N ** 2 / s ** 2) * _transform_term(side)


def spatial_cost(N, k) -> CostRow:
    _positive(N=N, k=k)
    if k > N:
        raise ValueError(f"kernel side {k} exceeds input side {N}")
    ops = (N - k + 1) ** 2 * k ** 2
    return CostRow(Method.SPATIAL, N, k, None, ops, ops, N ** 2 + k ** 2,
                   f"each input element read {k} times")


def full_fft_cost(N, k=1) -> CostRow:
    _positive(N=N, k=k)
    fft = N ** 2 * math.log2(N)
    return CostRow(Method.FULL_FFT, N, k, None, fft + N ** 2, fft, 2 * N ** 2,
                   "each location read once; whole image resident")


def oaa_cost(N, k) -> CostRow:
    return CostRow(Method.OAA, N, k, None, mul_oaa(N, k), add_oaa(N, k), N ** 2 + k ** 2,
                   "each input location read once")


def split_cost(N, s, k) -> CostRow:
    return CostRow(Method.SPLIT, N, k, s, mul_split(N, s, k), add_split(N, s, k),
                   N ** 2 + s ** 2, "each patch fetched once")


def asymptotic_costs(N, k, s) -> dict[Method, str]:
    """Big-O summaries, for documentation and CSV footers."""
    _positive(N=N, k=k, s=s)
    return {
        Method.SPATIAL: "(N - K + 1)² K² mults and adds; storage N² + K²",
        Method.FULL_FFT: "N² log N; storage 2N²",
        Method.OAA: "N² log k; storage N² + K²",
        Method.SPLIT: "N² log S; storage N² + S²",
    }


def sweep(N, k_values, s_values) -> list[CostRow]:
    """One OAA row per ``k`` followed by its SPLIT rows, one per ``s``."""
    k_values, s_values = list(k_values), list(s_values)
    if not k_values or not s_values:
        raise ValueError("k_values and s_values must be non-empty")
    rows = []
    for k in k_values:
        rows.append(oaa_cost(N, k))
        rows.extend(split_cost(N, s, k) for s in s_values)
    return rows
