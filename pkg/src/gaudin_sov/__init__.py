"""Exact verification of the classical and quantum Gaudin separation of variables."""

from .classical import (
    ConfigError,
    DegenerateSpectrum,
    IrrationalSpectrum,
    NotInDomain,
    SeparatedPoint,
    SystemConfig,
    alpha,
    beta,
    bm_hamiltonians,
    check_diagram,
    eta,
    eta_inv,
    hitchin_hamiltonians,
)
from .kernel import PolyRing, RatFunc, partial_fractions, poly_ring, ratfunc_eq, series_coeff
from .opalgebra import AlgebraDescriptor, GeneratorMap, NCElement, bracket, commutator
from .quantum import QuantumAlgebras, separation_checks
from .report import Check, SuiteReport
from .suites import RunConfig, run_suites

__all__ = [
    "AlgebraDescriptor",
    "Check",
    "ConfigError",
    "DegenerateSpectrum",
    "GeneratorMap",
    "IrrationalSpectrum",
    "NCElement",
    "NotInDomain",
    "PolyRing",
    "QuantumAlgebras",
    "RatFunc",
    "RunConfig",
    "SeparatedPoint",
    "SuiteReport",
    "SystemConfig",
    "alpha",
    "beta",
    "bm_hamiltonians",
    "bracket",
    "check_diagram",
    "commutator",
    "eta",
    "eta_inv",
    "hitchin_hamiltonians",
    "partial_fractions",
    "poly_ring",
    "ratfunc_eq",
    "run_suites",
    "series_coeff",
    "separation_checks",
]
