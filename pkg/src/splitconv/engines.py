"""Convolution engines: direct, whole-image FFT, overlap-add and split-patch FFT.

Every engine works on channel stacks internally; the single-channel entry
points (:func:`conv_full_fft`, :func:`conv_oaa`, :func:`conv_split`) are the
one-in/one-out case of the same code path. All engines return the result and
an :class:`~splitconv.fft.OpCount`.

The split engine is overlap-save: haloed patches are transformed, multiplied
by the kernel spectrum, inverse transformed and the valid ``S x S`` center is
kept, so patch outputs concatenate without any summation. The overlap-add
engine tiles the input into ``k x k`` blocks and sums the overlapping
``(2k-1) x (2k-1)`` block responses.
"""

from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .fft import FORWARD, OpCount, complex_to_real, fft2d, ifft2d, next_power_of_two
from .grid import (
    SAME,
    ConvMode,
    Padding,
    as_grid,
    as_kernel,
    as_stack,
    oriented_kernel,
)


class EngineKind(enum.Enum):
    DIRECT = "direct"
    FULL_FFT = "full_fft"
    OAA = "oaa"
    SPLIT = "split"


FFT_ENGINES = (EngineKind.FULL_FFT, EngineKind.OAA, EngineKind.SPLIT)


@dataclass(frozen=True)
class SplitPlan:
    """Geometry of one split-patch convolution.

    ``halo`` is the symmetric border used for SAME output. VALID output uses
    no leading border and a ``k - 1`` trailing border instead, which fetches
    the same ``S + k - 1`` patch side for odd kernels.
    """

    S: int
    k: int
    rows: int
    cols: int
    mode: ConvMode
    halo: int
    logical_patch: int
    fft_size: int
    grid_rows: int
    grid_cols: int

    @property
    def pad_before(self) -> int:
        return self.halo if self.mode.padding is Padding.SAME else 0

    @property
    def pad_after(self) -> int:
        return self.k - 1 - self.pad_before

    @property
    def patch_side(self) -> int:
        return self.S + self.pad_before + self.pad_after

    @property
    def n_patches(self) -> int:
        return self.grid_rows * self.grid_cols

    @property
    def out_shape(self) -> tuple[int, int]:
        return self.mode.output_shape(self.rows, self.cols, self.k)

    @property
    def patch_reads(self) -> int:
        return self.n_patches * self.patch_side ** 2

    @property
    def read_amplification(self) -> float:
        return self.patch_reads / (self.rows * self.cols)


def make_split_plan(N, k: int, S: int, mode: ConvMode = SAME) -> SplitPlan:
    """Plan a split convolution of an ``N x N`` (or ``(rows, cols)``) input."""
    rows, cols = (N, N) if np.isscalar(N) else tuple(N)
    if min(rows, cols) < 1:
        raise ValueError(f"input dimensions must be >= 1, got {rows}x{cols}")
    if S < 1:
        raise ValueError(f"patch size must be >= 1, got S={S}")
    if k < 1:
        raise ValueError(f"kernel side must be >= 1, got k={k}")
    mode.check(k, rows, cols)
    logical = S + k - 1
    return SplitPlan(
        S=S,
        k=k,
        rows=rows,
        cols=cols,
        mode=mode,
        halo=k // 2,
        logical_patch=logical,
        fft_size=next_power_of_two(logical),
        grid_rows=-(-rows // S),
        grid_cols=-(-cols // S),
    )


@dataclass(frozen=True)
class KernelSpectrum:
    """Forward transform of a zero-padded kernel (or a bank of kernels)."""

    fft_size: int
    spectrum: np.ndarray
    mode: ConvMode
    count: OpCount


def kernel_spectrum(kernel, fft_size: int, mode: ConvMode = SAME) -> KernelSpectrum:
    """Transform ``kernel`` zero-padded to ``fft_size x fft_size``.

    ``kernel`` may be a single ``k x k`` kernel or a ``(C_out, C_in, k, k)``
    weight bank; the orientation for ``mode`` is applied before the FFT.
    """
    w = np.asarray(kernel, dtype=np.float64)
    if w.ndim < 2 or w.shape[-1] != w.shape[-2]:
        raise ValueError(f"kernel must have square trailing axes, got shape {w.shape}")
    k = w.shape[-1]
    if k > fft_size:
        raise ValueError(f"kernel side {k} exceeds transform size {fft_size}")
    w = oriented_kernel(w, mode)
    pad = [(0, 0)] * (w.ndim - 2) + [(0, fft_size - k), (0, fft_size - k)]
    spec, count = fft2d(np.pad(w, pad), FORWARD)
    spec.flags.writeable = False
    return KernelSpectrum(fft_size, spec, mode, count)


def _accumulate(spectra: np.ndarray, bank: np.ndarray) -> tuple[np.ndarray, OpCount]:
    """Frequency-domain multiply-accumulate over input channels.

    ``spectra`` is ``(C_in, P, M, M)``, ``bank`` is ``(C_out, C_in, M, M)``;
    the result is ``(C_out, P, M, M)``.
    """
    c_in, p = spectra.shape[:2]
    c_out = bank.shape[0]
    if bank.shape[1] != c_in:
        raise ValueError(f"kernel bank expects {bank.shape[1]} input channels, got {c_in}")
    out = spectra[0][None] * bank[:, 0, None]
    for c in range(1, c_in):
        out += spectra[c][None] * bank[:, c, None]
    cells = p * spectra.shape[-1] * spectra.shape[-2]
    return out, OpCount(
        complex_mults=c_out * c_in * cells,
        complex_adds=c_out * (c_in - 1) * cells,
    )


def _residue_tol(y: np.ndarray) -> float:
    return 1e-6 * max(1.0, float(np.max(np.abs(y.real))) if y.size else 1.0)


def _check_layer(stack, weights, mode: ConvMode):
    x = as_stack(stack, "input")
    w = np.asarray(weights, dtype=np.float64)
    if w.ndim != 4 or w.shape[-1] != w.shape[-2] or min(w.shape) < 1:
        raise ValueError(f"weights must be (C_out, C_in, k, k), got shape {w.shape}")
    if not np.all(np.isfinite(w)):
        raise ValueError("weights contain NaN or Inf")
    if w.shape[1] != x.shape[0]:
        raise ValueError(
            f"channel mismatch: input has {x.shape[0]} channels, weights expect {w.shape[1]}"
        )
    mode.check(w.shape[-1], *x.shape[1:])
    return x, w


def _direct_layer(x, w, mode):
    c_out, c_in, k, _ = w.shape
    rows, cols = x.shape[1:]
    w = oriented_kernel(w, mode)
    off = mode.full_offset(k)
    out_rows, out_cols = mode.output_shape(rows, cols, k)
    xp = np.pad(x, ((0, 0), (k - 1, k - 1), (k - 1, k - 1)))
    out = np.zeros((c_out, out_rows, out_cols))
    for u in range(k):
        for v in range(k):
            r0 = off - u + k - 1
            c0 = off - v + k - 1
            window = xp[:, r0:r0 + out_rows, c0:c0 + out_cols]
            out += np.tensordot(w[:, :, u, v], window, axes=1)
    macs = c_out * c_in * out_rows * out_cols * k * k
    return out, OpCount(spatial_macs=macs, mem_reads=macs, mem_writes=out.size)


def _full_fft_layer(x, w, mode, bank=None):
    c_in, rows, cols = x.shape
    k = w.shape[-1]
    m = next_power_of_two(max(rows, cols) + k - 1)
    count = OpCount(mem_reads=x.size)
    if bank is None:
        bank = kernel_spectrum(w, m, mode)
        count += bank.count
    xf, c1 = fft2d(np.pad(x, ((0, 0), (0, m - rows), (0, m - cols)))[:, None], FORWARD)
    yf, c2 = _accumulate(xf, bank.spectrum)
    y, c3 = ifft2d(yf)
    y = complex_to_real(y[:, 0], _residue_tol(y))
    off = mode.full_offset(k)
    out_rows, out_cols = mode.output_shape(rows, cols, k)
    out = y[:, off:off + out_rows, off:off + out_cols].copy()
    return out, count + c1 + c2 + c3 + OpCount(mem_writes=out.size)


def _oaa_layer(x, w, mode, bank=None):
    c_in, rows, cols = x.shape
    c_out, _, k, _ = w.shape
    span = 2 * k - 1
    m = next_power_of_two(span)
    nbr, nbc = -(-rows // k), -(-cols // k)
    count = OpCount()
    if bank is None:
        bank = kernel_spectrum(w, m, mode)
        count += bank.count

    xp = np.pad(x, ((0, 0), (0, nbr * k - rows), (0, nbc * k - cols)))
    blocks = xp.reshape(c_in, nbr, k, nbc, k).transpose(0, 1, 3, 2, 4)
    blocks = blocks.reshape(c_in, nbr * nbc, k, k)
    count += OpCount(mem_reads=blocks.size)
    blocks = np.pad(blocks, ((0, 0), (0, 0), (0, m - k), (0, m - k)))

    bf, c1 = fft2d(blocks, FORWARD)
    yf, c2 = _accumulate(bf, bank.spectrum)
    y, c3 = ifft2d(yf)
    y = complex_to_real(y, _residue_tol(y))[..., :span, :span]
    y = y.reshape(c_out, nbr, nbc, span, span)

    full = np.zeros((c_out, nbr * k + k - 1, nbc * k + k - 1))
    cover = np.zeros(full.shape[1:], dtype=np.int64)
    for di in range(span):
        for dj in range(span):
            full[:, di:di + nbr * k:k, dj:dj + nbc * k:k] += y[:, :, :, di, dj]
            cover[di:di + nbr * k:k, dj:dj + nbc * k:k] += 1
    overlap = int(np.maximum(cover - 1, 0).sum()) * c_out

    off = mode.full_offset(k)
    out_rows, out_cols = mode.output_shape(rows, cols, k)
    out = full[:, off:off + out_rows, off:off + out_cols].copy()
    count += c1 + c2 + c3
    count += OpCount(overlap_adds=overlap, mem_writes=c_out * nbr * nbc * span * span)
    return out, count


def extract_patches(x: np.ndarray, plan: SplitPlan) -> np.ndarray:
    """Haloed patches of a ``(C, rows, cols)`` stack as ``(C, P, L, L)``."""
    s, before, after = plan.S, plan.pad_before, plan.pad_after
    gr, gc = plan.grid_rows, plan.grid_cols
    xp = np.pad(
        x,
        ((0, 0), (before, after + gr * s - plan.rows), (before, after + gc * s - plan.cols)),
    )
    side = plan.patch_side
    win = sliding_window_view(xp, (side, side), axis=(1, 2))[:, ::s, ::s]
    return win.reshape(x.shape[0], gr * gc, side, side)


def _split_chunk(patches, bank: KernelSpectrum, plan: SplitPlan):
    """Transform, multiply, inverse transform and crop a batch of patches."""
    m, side, s, k = plan.fft_size, plan.patch_side, plan.S, plan.k
    padded = np.pad(patches, ((0, 0), (0, 0), (0, m - side), (0, m - side)))
    xf, c1 = fft2d(padded, FORWARD)
    yf, c2 = _accumulate(xf, bank.spectrum)
    y, c3 = ifft2d(yf)
    y = complex_to_real(y, _residue_tol(y))
    return y[..., k - 1:k - 1 + s, k - 1:k - 1 + s], c1 + c2 + c3


def _split_layer(x, w, mode, plan: SplitPlan, bank=None, workers: int = 1):
    c_in = x.shape[0]
    c_out = w.shape[0]
    count = OpCount()
    if bank is None:
        bank = kernel_spectrum(w, plan.fft_size, mode)
        count += bank.count
    elif bank.fft_size != plan.fft_size:
        raise ValueError(f"kernel spectrum size {bank.fft_size} != plan size {plan.fft_size}")

    patches = extract_patches(x, plan)
    count += OpCount(mem_reads=patches.shape[0] * plan.patch_reads)
    n = plan.n_patches
    if workers > 1 and n > 1:
        bounds = np.linspace(0, n, min(workers, n) + 1).astype(int)
        chunks = [slice(a, b) for a, b in zip(bounds[:-1], bounds[1:])]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda sl: _split_chunk(patches[:, sl], bank, plan), chunks))
    else:
        parts = [_split_chunk(patches, bank, plan)]
    tiles = np.concatenate([p[0] for p in parts], axis=1)
    for _, c in parts:
        count += c

    s = plan.S
    out = tiles.reshape(c_out, plan.grid_rows, plan.grid_cols, s, s)
    out = out.transpose(0, 1, 3, 2, 4).reshape(c_out, plan.grid_rows * s, plan.grid_cols * s)
    out_rows, out_cols = plan.out_shape
    out = out[:, :out_rows, :out_cols].copy()
    return out, count + OpCount(mem_writes=out.size)


def convolve_patch(patch, bank: KernelSpectrum, plan: SplitPlan) -> tuple[np.ndarray, OpCount]:
    """Run the per-patch pipeline on one haloed patch, returning its ``S x S`` tile."""
    p = as_grid(patch, "patch")
    if p.shape != (plan.patch_side, plan.patch_side):
        raise ValueError(f"patch must be {plan.patch_side}x{plan.patch_side}, got {p.shape}")
    spec = bank.spectrum
    if spec.ndim == 2:
        bank = KernelSpectrum(bank.fft_size, spec[None, None], bank.mode, bank.count)
    tile, count = _split_chunk(p[None, None], bank, plan)
    return tile[0, 0], count


def conv_full_fft(grid, kernel, mode: ConvMode = SAME) -> tuple[np.ndarray, OpCount]:
    """Whole-image FFT convolution, linear (not circular) via padding."""
    x = as_grid(grid, "input")
    w = as_kernel(kernel)
    mode.check(w.shape[0], *x.shape)
    out, count = _full_fft_layer(x[None], w[None, None], mode)
    return out[0], count


def conv_oaa(grid, kernel, mode: ConvMode = SAME) -> tuple[np.ndarray, OpCount]:
    """Overlap-add convolution over ``k x k`` input blocks."""
    x = as_grid(grid, "input")
    w = as_kernel(kernel)
    mode.check(w.shape[0], *x.shape)
    out, count = _oaa_layer(x[None], w[None, None], mode)
    return out[0], count


def conv_split(
    grid,
    kernel,
    plan: SplitPlan,
    mode: ConvMode | None = None,
    kernel_spec: KernelSpectrum | None = None,
    workers: int = 1,
) -> tuple[np.ndarray, OpCount]:
    """Split-patch FFT convolution.

    A precomputed ``kernel_spec`` is reused as-is and its transform cost is
    not included in the returned count. ``workers > 1`` processes patch
    chunks on a thread pool; the output does not depend on it.
    """
    x = as_grid(grid, "input")
    w = as_kernel(kernel)
    mode = plan.mode if mode is None else mode
    if mode != plan.mode:
        raise ValueError(f"plan was built for mode {plan.mode}, got {mode}")
    if (plan.rows, plan.cols, plan.k) != (*x.shape, w.shape[0]):
        raise ValueError(
            f"plan is for a {plan.rows}x{plan.cols} input and k={plan.k}, "
            f"got {x.shape[0]}x{x.shape[1]} and k={w.shape[0]}"
        )
    bank = None
    if kernel_spec is not None:
        spec = kernel_spec.spectrum
        bank = KernelSpectrum(
            kernel_spec.fft_size, spec[None, None] if spec.ndim == 2 else spec,
            kernel_spec.mode, kernel_spec.count,
        )
    out, count = _split_layer(x[None], w[None, None], mode, plan, bank, workers)
    return out[0], count


def layer_forward(
    stack,
    weights,
    engine: EngineKind = EngineKind.SPLIT,
    S: int = 8,
    mode: ConvMode = SAME,
    workers: int = 1,
) -> tuple[np.ndarray, OpCount]:
    """Multi-channel convolution layer without bias or activation.

    ``stack`` is ``(C_in, H, W)`` and ``weights`` is ``(C_out, C_in, k, k)``.
    Output channel ``o`` is the sum over input channels of their
    convolutions; FFT engines perform that sum on spectra, so each output
    patch costs one inverse transform per output channel.
    """
    engine = EngineKind(engine)
    x, w = _check_layer(stack, weights, mode)
    if engine is EngineKind.DIRECT:
        return _direct_layer(x, w, mode)
    if engine is EngineKind.FULL_FFT:
        return _full_fft_layer(x, w, mode)
    if engine is EngineKind.OAA:
        return _oaa_layer(x, w, mode)
    plan = make_split_plan(x.shape[1:], w.shape[-1], S, mode)
    return _split_layer(x, w, mode, plan, workers=workers)


def convolve(grid, kernel, engine: EngineKind, mode: ConvMode = SAME, S: int = 8):
    """Single-channel dispatch used by verification and benchmarks."""
    engine = EngineKind(engine)
    x = as_grid(grid, "input")
    w = as_kernel(kernel)
    out, count = layer_forward(x[None], w[None, None], engine, S, mode)
    return out[0], count
