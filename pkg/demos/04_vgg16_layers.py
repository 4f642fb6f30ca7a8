"""Multi-channel layers on scaled-down VGG16 shapes.

Run with ``python demos/04_vgg16_layers.py``. ``splitconv bench`` produces the
full CSV.
"""

# %% Setup
import numpy as np

from splitconv import EngineKind, layer_forward, max_abs_diff
from splitconv.bench import bench_layer, vgg16_layers

rng = np.random.default_rng(0)

# %% One layer, every engine, accumulated in the frequency domain across input channels
layer = vgg16_layers()[3].scaled(0.125)
x = rng.uniform(-1, 1, (layer.C_in, layer.H, layer.W))
w = rng.uniform(-1, 1, (layer.C_out, layer.C_in, 3, 3))
ref, _ = layer_forward(x, w, EngineKind.DIRECT)
for engine in EngineKind:
    y, c = layer_forward(x, w, engine, S=8)
    print(f"{engine.value:9s} err={max_abs_diff(y, ref):.1e} "
          f"forward={c.forward_transforms:5d} inverse={c.inverse_transforms:5d}")

# %% Timings for the first few layers (host wall clock, not an FPGA model)
for spec in vgg16_layers()[:4]:
    for rec in bench_layer(spec.scaled(0.125), [EngineKind.DIRECT, EngineKind.SPLIT], 8, 3, rng):
        print(f"{spec.name} {rec.engine.value:7s} {rec.wall_time_ns / 1e6:8.2f} ms "
              f"err={rec.max_abs_err_vs_direct:.1e}")
