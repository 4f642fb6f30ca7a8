"""Real 2-D grids, geometric primitives and the direct convolution oracle.

Grids are plain ``float64`` numpy arrays. The helpers here validate shape
and finiteness at the boundary and never mutate their inputs.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np


class Padding(enum.Enum):
    SAME = "same"
    VALID = "valid"


class Operation(enum.Enum):
    CONVOLUTION = "convolution"
    CORRELATION = "correlation"


@dataclass(frozen=True)
class ConvMode:
    """Output-size convention plus whether the kernel is flipped."""

    padding: Padding = Padding.SAME
    operation: Operation = Operation.CONVOLUTION

    def __post_init__(self):
        object.__setattr__(self, "padding", Padding(self.padding))
        object.__setattr__(self, "operation", Operation(self.operation))

    def __str__(self):
        return f"{self.padding.value}/{self.operation.value}"

    def check(self, k: int, rows: int, cols: int) -> None:
        if self.padding is Padding.SAME and k % 2 == 0:
            raise ValueError(f"SAME padding needs an odd kernel side, got k={k}")
        if self.padding is Padding.VALID and k > min(rows, cols):
            raise ValueError(
                f"VALID convolution needs k <= min(rows, cols); got k={k} "
                f"for a {rows}x{cols} input"
            )

    def output_shape(self, rows: int, cols: int, k: int) -> tuple[int, int]:
        if self.padding is Padding.SAME:
            return rows, cols
        return rows - k + 1, cols - k + 1

    def full_offset(self, k: int) -> int:
        """Offset of output index 0 inside the full linear convolution."""
        return k // 2 if self.padding is Padding.SAME else k - 1


SAME = ConvMode(Padding.SAME, Operation.CONVOLUTION)
VALID = ConvMode(Padding.VALID, Operation.CONVOLUTION)


def as_grid(values, name: str = "grid") -> np.ndarray:
    """Return ``values`` as a finite, non-empty 2-D float64 array."""
    a = np.asarray(values, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise ValueError(f"{name} must be a non-empty 2-D array, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} contains NaN or Inf")
    return a


def as_kernel(values) -> np.ndarray:
    w = as_grid(values, "kernel")
    if w.shape[0] != w.shape[1]:
        raise ValueError(f"kernel must be square, got shape {w.shape}")
    return w


def as_stack(values, name: str = "stack") -> np.ndarray:
    """Return a finite ``(channels, rows, cols)`` float64 array."""
    a = np.asarray(values, dtype=np.float64)
    if a.ndim != 3 or min(a.shape) < 1:
        raise ValueError(f"{name} must be a non-empty 3-D array, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} contains NaN or Inf")
    return a


def oriented_kernel(kernel: np.ndarray, mode: ConvMode) -> np.ndarray:
    """Kernel to feed a true convolution so that it realizes ``mode``."""
    if mode.operation is Operation.CORRELATION:
        return kernel[..., ::-1, ::-1]
    return kernel


def pad_zero(grid, top: int, bottom: int, left: int, right: int) -> np.ndarray:
    if min(top, bottom, left, right) < 0:
        raise ValueError("padding margins must be non-negative")
    g = as_grid(grid)
    return np.pad(g, ((top, bottom), (left, right)))


def crop(grid, row0: int, col0: int, h: int, w: int) -> np.ndarray:
    g = np.asarray(grid)
    rows, cols = g.shape[-2:]
    if row0 < 0 or col0 < 0 or h < 0 or w < 0 or row0 + h > rows or col0 + w > cols:
        raise ValueError(
            f"crop window rows {row0}:{row0 + h}, cols {col0}:{col0 + w} "
            f"outside a {rows}x{cols} grid"
        )
    return g[..., row0:row0 + h, col0:col0 + w].copy()


def _split(grid: np.ndarray, size: int, before: int, after: int):
    """Tile ``grid`` into ``size``-wide interiors with asymmetric margins.

    Returns the padded grid and the list of ``(i, j, patch)`` where each
    patch spans ``size + before + after`` on both axes.
    """
    rows, cols = grid.shape
    gr, gc = -(-rows // size), -(-cols // size)
    padded = np.pad(
        grid,
        ((before, after + gr * size - rows), (before, after + gc * size - cols)),
    )
    span = size + before + after
    patches = [
        (i, j, padded[i * size:i * size + span, j * size:j * size + span].copy())
        for i in range(gr)
        for j in range(gc)
    ]
    return padded, patches


def split_with_halo(grid, patch: int, halo: int) -> list[tuple[int, int, np.ndarray]]:
    """Split into ``patch``-sized tiles, each carrying a ``halo``-wide border.

    The input is zero-padded by ``halo`` on all sides and, when a side is not
    a multiple of ``patch``, zero-extended at the bottom/right. Patches are
    returned in row-major lattice order.
    """
    if patch < 1:
        raise ValueError(f"patch size must be >= 1, got {patch}")
    if halo < 0:
        raise ValueError(f"halo must be >= 0, got {halo}")
    return _split(as_grid(grid), patch, halo, halo)[1]


def concat_patches(patches, out_rows: int, out_cols: int) -> np.ndarray:
    """Inverse of a halo-free split: place patch (i, j) at (i*S, j*S)."""
    patches = list(patches)
    if not patches:
        raise ValueError("no patches to concatenate")
    shape = np.shape(patches[0][2])
    if len(shape) != 2 or shape[0] != shape[1]:
        raise ValueError(f"patches must be square, got shape {shape}")
    s = shape[0]
    gr, gc = -(-out_rows // s), -(-out_cols // s)
    seen = set()
    canvas = np.zeros((gr * s, gc * s))
    for i, j, p in patches:
        if np.shape(p) != shape:
            raise ValueError(f"patch ({i}, {j}) has shape {np.shape(p)}, expected {shape}")
        if not (0 <= i < gr and 0 <= j < gc):
            raise ValueError(f"patch coordinate ({i}, {j}) outside the {gr}x{gc} lattice")
        if (i, j) in seen:
            raise ValueError(f"duplicate patch coordinate ({i}, {j})")
        seen.add((i, j))
        canvas[i * s:(i + 1) * s, j * s:(j + 1) * s] = p
    if len(seen) != gr * gc:
        missing = sorted({(i, j) for i in range(gr) for j in range(gc)} - seen)
        raise ValueError(f"missing patch coordinates: {missing}")
    return canvas[:out_rows, :out_cols]


def max_abs_diff(a, b) -> float:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(a - b)))


def direct_conv2d(grid, kernel, mode: ConvMode = SAME) -> np.ndarray:
    """Spatial-domain convolution, one shifted multiply-accumulate per tap.

    This is the correctness reference for every FFT engine.
    """
    x = as_grid(grid, "input")
    w = as_kernel(kernel)
    k = w.shape[0]
    mode.check(k, *x.shape)
    w = oriented_kernel(w, mode)

    # full linear convolution restricted to the requested window
    off = mode.full_offset(k)
    out_rows, out_cols = mode.output_shape(*x.shape, k)
    xp = np.pad(x, k - 1)
    out = np.zeros((out_rows, out_cols))
    for u in range(k):
        for v in range(k):
            r0 = off - u + k - 1
            c0 = off - v + k - 1
            out += w[u, v] * xp[r0:r0 + out_rows, c0:c0 + out_cols]
    return out
