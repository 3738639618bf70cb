"""Diagonal distributions on compact Hermitian symmetric spaces.

Closed-form Fourier transforms (Harish-Chandra's c-function and its
component-wise analogue), Haar Monte Carlo estimators, and numerical
certification of the Poisson-geometric and Bott-Samelson identities
behind them.
"""
__version__ = "0.1.0"

from .errors import (
    CartanDiagError,
    ConfigError,
    InadmissibleComponent,
    NonGeneric,
    NonReducedWord,
    PhaseError,
    PoleError,
    QuadratureError,
    StepTooSmall,
    UnsupportedRootSystem,
)
from .rootsys import RootSystem, Weight, WeylWord, build_root_system, longest_word
from .symspace import ComponentIndex, SymmetricSpaceSpec, enumerate_components, get_space, order_M
from .closedform import FormulaValue, c_function, component_term, diagonal_fourier, eigenfunction_sum
from .haarmc import MCEstimate, estimate_diagonal_integral, estimate_group_integral, hyperbolic_quadrature
from .matreal import cartan_embed, haar_unitary, iwasawa, ldu

__all__ = [
    "CartanDiagError", "ConfigError", "InadmissibleComponent", "NonGeneric", "NonReducedWord",
    "PhaseError", "PoleError", "QuadratureError", "StepTooSmall", "UnsupportedRootSystem",
    "RootSystem", "Weight", "WeylWord", "build_root_system", "longest_word",
    "ComponentIndex", "SymmetricSpaceSpec", "enumerate_components", "get_space", "order_M",
    "FormulaValue", "c_function", "component_term", "diagonal_fourier", "eigenfunction_sum",
    "MCEstimate", "estimate_diagonal_integral", "estimate_group_integral", "hyperbolic_quadrature",
    "cartan_embed", "haar_unitary", "iwasawa", "ldu",
]
