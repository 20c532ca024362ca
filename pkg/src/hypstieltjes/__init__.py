"""Generalized hypergeometric functions through their Stieltjes representation."""
from .gdensity import DEFAULT_CONFIG, GKernelSpec, QuadratureConfig, meijer_g
from .hypeval import eval_series
from .pade import PadeApproximant, pade
from .params import MajorizationVerdict, ParameterSet, majorization_verdict
from .stieltjes import DensitySpec, eval_stieltjes, hypergeometric, power_denominator_rep
from .verify import VerificationReport, verify_suite

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_CONFIG",
    "DensitySpec",
    "GKernelSpec",
    "MajorizationVerdict",
    "PadeApproximant",
    "ParameterSet",
    "QuadratureConfig",
    "VerificationReport",
    "eval_series",
    "eval_stieltjes",
    "hypergeometric",
    "majorization_verdict",
    "meijer_g",
    "pade",
    "power_denominator_rep",
    "verify_suite",
]
