"""Radix-2 Cooley-Tukey FFT with butterfly counters.

The transforms are iterative decimation-in-time, vectorized over every
leading axis so a batch of patches costs one numpy pass per stage. Each
call returns the result together with an :class:`OpCount` describing the
butterfly work it performed.

Conventions:

* forward is unnormalized, inverse carries ``1/M`` per 1-D pass;
* one complex multiply = 4 real multiplies + 2 real adds;
* every butterfly counts one complex multiply, trivial twiddles included;
* twiddle generation is not counted.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, fields
from functools import lru_cache

import numpy as np


class Direction(enum.Enum):
    FORWARD = -1
    INVERSE = 1


FORWARD = Direction.FORWARD
INVERSE = Direction.INVERSE


@dataclass(frozen=True)
class OpCount:
    """Tally of arithmetic and memory traffic for one computation.

    ``overlap_adds`` counts real additions made while accumulating
    overlapping block outputs. ``spatial_macs`` counts real multiply-
    accumulates done outside the frequency domain. Memory counters track
    input-data element reads and output element writes.
    """

    complex_mults: int = 0
    complex_adds: int = 0
    overlap_adds: int = 0
    spatial_macs: int = 0
    mem_reads: int = 0
    mem_writes: int = 0
    forward_transforms: int = 0
    inverse_transforms: int = 0

    @property
    def real_mults(self) -> int:
        return 4 * self.complex_mults

    @property
    def real_adds(self) -> int:
        return 2 * self.complex_mults + 2 * self.complex_adds

    def __add__(self, other: "OpCount") -> "OpCount":
        if not isinstance(other, OpCount):
            return NotImplemented
        return OpCount(*(getattr(self, f.name) + getattr(other, f.name) for f in fields(self)))

    def scaled(self, times: int) -> "OpCount":
        return OpCount(*(getattr(self, f.name) * times for f in fields(self)))

    def as_dict(self) -> dict:
        d = {f.name: getattr(self, f.name) for f in fields(self)}
        d["real_mults"] = self.real_mults
        d["real_adds"] = self.real_adds
        return d


def is_power_of_two(n: int) -> bool:
    return n >= 1 and n & (n - 1) == 0


def next_power_of_two(n: int) -> int:
    if n < 1:
        raise ValueError(f"size must be >= 1, got {n}")
    return 1 << (n - 1).bit_length()


def _log2(m: int) -> int:
    return m.bit_length() - 1


@lru_cache(maxsize=None)
def _bit_reverse(m: int) -> np.ndarray:
    bits = _log2(m)
    idx = np.arange(m)
    rev = np.zeros(m, dtype=np.intp)
    for b in range(bits):
        rev |= ((idx >> b) & 1) << (bits - 1 - b)
    rev.flags.writeable = False
    return rev


@lru_cache(maxsize=None)
def _twiddles(m: int, sign: int) -> np.ndarray:
    # m/2 factors for a butterfly stage spanning m points
    t = np.exp(sign * 2j * np.pi * np.arange(m // 2) / m)
    t.flags.writeable = False
    return t


def line_count(m: int) -> OpCount:
    """Butterfly work of one ``m``-point transform."""
    stages = _log2(m)
    return OpCount(complex_mults=(m // 2) * stages, complex_adds=m * stages)


def _fft_last_axis(x: np.ndarray, direction: Direction) -> np.ndarray:
    m = x.shape[-1]
    if not is_power_of_two(m):
        raise ValueError(f"transform length must be a power of two, got {m}")
    lead = x.shape[:-1]
    y = x[..., _bit_reverse(m)].astype(np.complex128)
    span = 2
    while span <= m:
        half = span // 2
        y = y.reshape(*lead, m // span, span)
        even = y[..., :half]
        odd = y[..., half:] * _twiddles(span, direction.value)
        y = np.concatenate((even + odd, even - odd), axis=-1)
        span *= 2
    y = y.reshape(*lead, m)
    if direction is Direction.INVERSE:
        y = y / m
    return y


def fft1d(line, direction: Direction = FORWARD) -> tuple[np.ndarray, OpCount]:
    x = np.asarray(line, dtype=np.complex128)
    if x.ndim != 1:
        raise ValueError(f"fft1d expects a 1-D sequence, got shape {x.shape}")
    return _fft_last_axis(x, Direction(direction)), line_count(x.shape[0])


def fft2d(grid, direction: Direction = FORWARD) -> tuple[np.ndarray, OpCount]:
    """Row-column 2-D transform over the last two axes.

    Leading axes are treated as a batch of independent grids; the returned
    count covers the whole batch.
    """
    direction = Direction(direction)
    x = np.asarray(grid, dtype=np.complex128)
    if x.ndim < 2:
        raise ValueError(f"fft2d expects at least 2 dimensions, got shape {x.shape}")
    rows, cols = x.shape[-2:]
    for n in (rows, cols):
        if not is_power_of_two(n):
            raise ValueError(f"grid dimensions must be powers of two, got {rows}x{cols}")
    batch = int(np.prod(x.shape[:-2], dtype=np.int64))

    y = _fft_last_axis(x, direction)
    y = np.swapaxes(_fft_last_axis(np.swapaxes(y, -1, -2), direction), -1, -2)

    count = line_count(cols).scaled(rows) + line_count(rows).scaled(cols)
    count = count.scaled(batch)
    if direction is Direction.FORWARD:
        count += OpCount(forward_transforms=batch)
    else:
        count += OpCount(inverse_transforms=batch)
    return y, count


def ifft2d(spectrum) -> tuple[np.ndarray, OpCount]:
    return fft2d(spectrum, INVERSE)


def hadamard(a, b) -> tuple[np.ndarray, OpCount]:
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return a * b, OpCount(complex_mults=a.size)


def real_to_complex(grid) -> np.ndarray:
    return np.asarray(grid, dtype=np.float64).astype(np.complex128)


def complex_to_real(grid, tol: float = 1e-9) -> np.ndarray:
    """Real part of ``grid``; raises if any imaginary residue exceeds ``tol``."""
    z = np.asarray(grid)
    if np.iscomplexobj(z) and z.size:
        residue = float(np.max(np.abs(z.imag)))
        if residue > tol:
            raise ValueError(
                f"imaginary residue {residue:.3e} exceeds tolerance {tol:.3e}"
            )
    return np.real(z).astype(np.float64)
