"""VGG16 layer shapes and a wall-clock harness for the convolution engines."""

from __future__ import annotations

import math
import statistics
import time
from dataclasses import dataclass, field

import numpy as np

from .engines import EngineKind, layer_forward
from .fft import OpCount
from .grid import SAME, ConvMode, max_abs_diff


@dataclass(frozen=True)
class LayerSpec:
    name: str
    H: int
    W: int
    C_in: int
    C_out: int
    k: int = 3

    def __post_init__(self):
        if min(self.H, self.W, self.C_in, self.C_out, self.k) < 1:
            raise ValueError(f"layer {self.name}: all dimensions must be positive")
        if self.k % 2 == 0:
            raise ValueError(f"layer {self.name}: kernel side must be odd, got {self.k}")

    def scaled(self, scale: float) -> "LayerSpec":
        """Shrink spatial dims and channel counts by ``scale`` (rounded up)."""
        if not 0 < scale <= 1:
            raise ValueError(f"scale must be in (0, 1], got {scale}")

        def shrink(n):
            return max(1, math.ceil(n * scale - 1e-9))

        return LayerSpec(self.name, shrink(self.H), shrink(self.W),
                         shrink(self.C_in), shrink(self.C_out), self.k)


_VGG16 = [
    ("conv1_1", 224, 3, 64),
    ("conv1_2", 224, 64, 64),
    ("conv2_1", 112, 64, 128),
    ("conv2_2", 112, 128, 128),
    ("conv3_1", 56, 128, 256),
    ("conv3_2", 56, 256, 256),
    ("conv3_3", 56, 256, 256),
    ("conv4_1", 28, 256, 512),
    ("conv4_2", 28, 512, 512),
    ("conv4_3", 28, 512, 512),
    ("conv5_1", 14, 512, 512),
    ("conv5_2", 14, 512, 512),
    ("conv5_3", 14, 512, 512),
]


def vgg16_layers() -> list[LayerSpec]:
    """The 13 convolutional layers of VGG16, all 3x3."""
    return [LayerSpec(name, hw, hw, cin, cout, 3) for name, hw, cin, cout in _VGG16]


@dataclass
class BenchRecord:
    layer: LayerSpec
    engine: EngineKind
    S: int | None
    wall_time_ns: int
    max_abs_err_vs_direct: float
    opcount: OpCount = field(default_factory=OpCount)
    error: str = ""


def _time_ns(fn, repeats: int) -> tuple[int, object]:
    result = fn()  # warm-up, excluded from timing
    samples = []
    for _ in range(repeats):
        t0 = time.perf_counter_ns()
        fn()
        samples.append(time.perf_counter_ns() - t0)
    return int(statistics.median(samples)), result


def bench_layer(
    layer: LayerSpec,
    engines,
    S: int = 8,
    repeats: int = 3,
    rng: np.random.Generator | None = None,
    mode: ConvMode = SAME,
) -> list[BenchRecord]:
    """Time each engine on one layer, checking every result against DIRECT.

    Inputs and weights are drawn uniformly from [-1, 1]. The DIRECT output is
    always computed as the reference even when DIRECT is not timed.
    """
    if repeats < 1:
        raise ValueError(f"repeats must be >= 1, got {repeats}")
    rng = np.random.default_rng() if rng is None else rng
    engines = [EngineKind(e) for e in engines]
    try:
        x = rng.uniform(-1, 1, (layer.C_in, layer.H, layer.W))
        w = rng.uniform(-1, 1, (layer.C_out, layer.C_in, layer.k, layer.k))
        reference, _ = layer_forward(x, w, EngineKind.DIRECT, S, mode)
    except MemoryError as exc:
        return [BenchRecord(layer, e, None, 0, math.nan, error=f"out of memory: {exc}")
                for e in engines]

    records = []
    for engine in engines:
        s = S if engine is EngineKind.SPLIT else None
        try:
            wall, (out, count) = _time_ns(lambda: layer_forward(x, w, engine, S, mode), repeats)
        except MemoryError as exc:
            records.append(BenchRecord(layer, engine, s, 0, math.nan,
                                       error=f"out of memory: {exc}"))
            continue
        records.append(BenchRecord(layer, engine, s, wall, max_abs_diff(out, reference), count))
    return records
