"""Kernel density and CDF estimation of unit-level heterogeneity in panel data."""

from ._backend import BACKEND
from .bandwidth import BandwidthPolicy, resolve, rot_bandwidth
from .density import EstimateGrid, EvalGrid, default_grid, ecdf, kcdf, kde
from .errors import PanelHetError
from .jackknife import (
    HPJ_WEIGHTS,
    TOJ_WEIGHTS,
    hpj_combine,
    jackknife_density,
    subpanel_estimates,
    toj_combine,
)
from .kernels import EPANECHNIKOV, GAUSSIAN, KernelSpec, get_kernel, k_cdf, k_d2, k_eval
from .panel import PanelData, load_csv, split_half, split_thirds
from .rbc import (
    RbcConfig,
    RbcInterval,
    combined_kernel_hpj,
    combined_kernel_ne,
    combined_kernel_toj,
    normal_quantile,
    rbc_band,
    rbc_interval,
)
from .sim import McConfig, McStudyResult, run_study, simulate_panel, true_density, true_quantile
from .unit_stats import (
    Autocorrelation,
    Autocovariance,
    HeterogeneityKind,
    Mean,
    UnitEstimates,
    estimate_units,
)

__version__ = "0.1.0"
