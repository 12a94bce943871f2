"""Wide-dynamic-range tone mapping by multi-scale histogram synthesis."""

from .core import LuminanceField, ToneParams, WdrImage, WindowRect, validate_params
from .integral import (
    IntegralHistogram,
    IntegralImage,
    build_integral,
    build_integral_histogram,
    rect_sum,
    window_bin_populations,
    window_variance,
)
from .metrics import QualityReport, brightness, contrast, quality_report, sharpness
from .tonemap import (
    MsHist,
    ScalePlan,
    ToneCurve,
    extract_luminance,
    fuse,
    restore_color,
    scale_windows,
    texture_score_at,
    to_log_domain,
    tone_value_at,
    tonemap,
    tonemap_luminance,
)

__version__ = "0.1.0"
