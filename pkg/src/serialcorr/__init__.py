"""serialcorr: inference on autocovariances of stationary time series.

Max-deviation (Gumbel-calibrated) and quadratic (normal-calibrated)
serial-correlation tests with growing lag counts, a blocks-of-blocks
bootstrap for finite-sample calibration, simulators for the four benchmark
processes, physical-dependence and joint-cumulant estimators, and a Monte
Carlo harness with delimited and figure output.
"""

__version__ = "0.1.0"

from .estimators import AcfEstimate, TimeSeries, acf, acf_fast
from .asymptotics import (
    GumbelNorming,
    LongRunVariance,
    default_t_n,
    gumbel_cdf,
    gumbel_norming,
    gumbel_quantile,
    l2_variance_plugin,
    sigma0_plugin,
    sigma_h_theoretical,
)
from .hypotests import (
    L2TestResult,
    MaxTestResult,
    NullSpec,
    l2_power_approx,
    l2_test,
    max_test,
    tau1_monte_carlo,
)
from .bootstrap import BootstrapConfig, BootstrapReport, bob_population_correlations, bob_test
from .models import ModelSpec, simulate, theoretical_acf
from .dependence import DependenceProfile, estimate_delta, joint_cumulant, zeta_bound
from .harness import (
    BootstrapSettings,
    ExperimentConfig,
    ExperimentResult,
    emit_report,
    parse_report,
    run_experiment,
)

__all__ = [
    "__version__",
    "AcfEstimate",
    "TimeSeries",
    "acf",
    "acf_fast",
    "GumbelNorming",
    "LongRunVariance",
    "default_t_n",
    "gumbel_cdf",
    "gumbel_norming",
    "gumbel_quantile",
    "l2_variance_plugin",
    "sigma0_plugin",
    "sigma_h_theoretical",
    "L2TestResult",
    "MaxTestResult",
    "NullSpec",
    "l2_power_approx",
    "l2_test",
    "max_test",
    "tau1_monte_carlo",
    "BootstrapConfig",
    "BootstrapReport",
    "bob_population_correlations",
    "bob_test",
    "ModelSpec",
    "simulate",
    "theoretical_acf",
    "DependenceProfile",
    "estimate_delta",
    "joint_cumulant",
    "zeta_bound",
    "BootstrapSettings",
    "ExperimentConfig",
    "ExperimentResult",
    "emit_report",
    "parse_report",
    "run_experiment",
]
