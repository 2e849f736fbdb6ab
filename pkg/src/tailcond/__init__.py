"""Archimedean and Archimax copulas with exact conditional tail diagnostics.

The package provides generator families with tail-condition probes, D-norms,
copula evaluation and exact conditional distributions, frailty samplers,
componentwise-maxima normalization, a rank-based Pickands dependence
estimator with a tail-independence test, and a two-step simulation pipeline
contrasting unconditional and conditional extremal behaviour.
"""

from .copulas import (CopulaModel, NormingConstants, archimax_logistic_reduction,
                      cdf, conditional_cdf, conditional_limit_probe,
                      conditional_margin, doa_convergence_probe, doa_limit,
                      make_model, norming_constants, reduce_to_archimedean)
from .dnorms import DNorm, NormKind, PowerNorm, power_transform
from .errors import (CriticalValueUnavailableError, DegeneratePointError,
                     DimensionError, DomainError, EmptySampleError,
                     ParameterError, RegionError, ShortfallError,
                     TailcondError, UnsupportedModelError)
from .experiment import (DEFAULT_SEED, ExperimentConfig, ExperimentReport,
                         PRESETS, figure_data, preset_config, run_experiment,
                         run_table)
from .generators import (ConditionReport, Family, Generator, PowerGenerator,
                         generator_from_dict)
from .maxima import (MaximaSample, componentwise_max_conditional,
                     componentwise_max_unconditional, stack_conditional,
                     stack_unconditional)
from .pickands import (SimplexGrid, TailTestResult, critical_value,
                       estimate_pickands, run_test, simplex_grid,
                       test_statistic)
from .sampling import (SampleMatrix, SliceSample, accumulate_slice,
                       conditional_slice, positive_stable, rng_from_key,
                       sample_archimedean, sample_rows)

__version__ = "1.0.0"

__all__ = [
    "CopulaModel", "NormingConstants", "archimax_logistic_reduction", "cdf",
    "conditional_cdf", "conditional_limit_probe", "conditional_margin",
    "doa_convergence_probe", "doa_limit", "make_model", "norming_constants",
    "reduce_to_archimedean",
    "DNorm", "NormKind", "PowerNorm", "power_transform",
    "CriticalValueUnavailableError", "DegeneratePointError", "DimensionError",
    "DomainError", "EmptySampleError", "ParameterError", "RegionError",
    "ShortfallError", "TailcondError", "UnsupportedModelError",
    "DEFAULT_SEED", "ExperimentConfig", "ExperimentReport", "PRESETS",
    "figure_data", "preset_config", "run_experiment", "run_table",
    "ConditionReport", "Family", "Generator", "PowerGenerator",
    "generator_from_dict",
    "MaximaSample", "componentwise_max_conditional",
    "componentwise_max_unconditional", "stack_conditional",
    "stack_unconditional",
    "SimplexGrid", "TailTestResult", "critical_value", "estimate_pickands",
    "run_test", "simplex_grid", "test_statistic",
    "SampleMatrix", "SliceSample", "accumulate_slice", "conditional_slice",
    "positive_stable", "rng_from_key", "sample_archimedean", "sample_rows",
    "__version__",
]
