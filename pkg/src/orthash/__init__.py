"""Orthogonal arrays and strongly t-universal hash functions for any alphabet size."""

from ._backend import BACKEND
from .codes import (
    BuildPlan,
    FarVector,
    LinearCode,
    dual_distance_at_least,
    far_from_code,
    gv_random_code,
    plan_random,
    plan_rs,
    random_far_vector,
    rs_bad_vector,
    rs_code,
)
from .errors import (
    BudgetExceededError,
    CapExceededError,
    ConfigError,
    OAError,
    SearchExhaustedError,
)
from .field import FieldCtx, field_new
from .hash import HashFunction, hash_new
from .oa import (
    OrthogonalArray,
    build_oa,
    bush_oa,
    phi,
    product_oa,
    rao_bound,
    read_oa,
    write_oa,
)
from .primes import PrimeSearchConfig, eta_for, is_prime, prime_in_ap
from .verify import exact_hash_distribution, verify_oa

__version__ = "0.1.0"
