"""Injectivity, gauge uniqueness and symmetries of small MPS and PEPS, checked exactly."""
from .errors import (
    IllConditionedGauge,
    IncompatibleBonds,
    NonUniqueGauge,
    NotASymmetry,
    NotFoundBelowCap,
    NotSameState,
    TensorNetworkError,
)
from .gauge import (
    GaugeCertificate,
    canonicalize_obc,
    factor_product_preserving,
    honeycomb_gauge,
    intertwiner_space,
    mps_gauge,
    peps_gauge,
    split_gauge,
)
from .injectivity import InjectivityReport, is_injective_mps, is_injective_peps, minimal_injective_length
from .lattice import MpsSpec, PepsSpec, apply_gauge, mps_state, peps_state
from .states import example_states
from .symmetry import certify_local, certify_representation, certify_spatial
from .tensor_core import DEFAULT_TOL, Tolerance

__version__ = "0.1.0"

__all__ = [
    "IllConditionedGauge",
    "IncompatibleBonds",
    "NonUniqueGauge",
    "NotASymmetry",
    "NotFoundBelowCap",
    "NotSameState",
    "TensorNetworkError",
    "GaugeCertificate",
    "canonicalize_obc",
    "factor_product_preserving",
    "honeycomb_gauge",
    "intertwiner_space",
    "mps_gauge",
    "peps_gauge",
    "split_gauge",
    "InjectivityReport",
    "is_injective_mps",
    "is_injective_peps",
    "minimal_injective_length",
    "MpsSpec",
    "PepsSpec",
    "apply_gauge",
    "mps_state",
    "peps_state",
    "example_states",
    "certify_local",
    "certify_representation",
    "certify_spatial",
    "DEFAULT_TOL",
    "Tolerance",
]
