"""Split-patch FFT convolution with direct, whole-image FFT and overlap-add baselines."""

from .costmodel import (
    CostRow,
    Method,
    add_oaa,
    add_split,
    asymptotic_costs,
    mul_oaa,
    mul_split,
    spatial_cost,
    sweep,
)
from .engines import (
    EngineKind,
    KernelSpectrum,
    SplitPlan,
    conv_full_fft,
    conv_oaa,
    conv_split,
    convolve,
    kernel_spectrum,
    layer_forward,
    make_split_plan,
)
from .fft import FORWARD, INVERSE, OpCount, fft1d, fft2d, hadamard, ifft2d
from .grid import (
    SAME,
    VALID,
    ConvMode,
    Operation,
    Padding,
    concat_patches,
    crop,
    direct_conv2d,
    max_abs_diff,
    pad_zero,
    split_with_halo,
)
from .planner import PlanRequest, PlanResult, choose_patch_size

__version__ = "0.1.0"
