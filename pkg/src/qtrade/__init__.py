"""Minimum subspace bitrades T_q(t,k,v) in Grassmann graphs."""

from .gf import FieldSpec, field_spec
from .grassmann import (
    CanonicalSubspace,
    GrassmannParams,
    enumerate_subspaces,
    gaussian_binomial,
    grassmann_distance,
    grassmann_eigenvalue,
    hat_set,
)
from .search import search_below
from .spectra import (
    SignedFunction,
    expected_min_distribution,
    hat_weight_distribution,
    intersection_numbers,
    predicted_distribution,
    weight_distribution,
)
from .trades import Bitrade, TradeParams, construct_minimum, min_cardinality, verify_bitrade

__version__ = "0.1.0"
