"""Figure rendering for exported spectral-efficiency CDF series."""

from .render import (
    DEFAULT_XLABEL,
    DEFAULT_YLABEL,
    PlotSpec,
    build_cdf_figure,
    load_series,
    render_cdf_figure,
)

__version__ = "0.1.0"
