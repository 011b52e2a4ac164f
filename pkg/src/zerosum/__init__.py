"""Zero-sum sequences over finite abelian groups."""

from .errors import BudgetExhausted, ZeroSumError
from .group import FiniteAbelianGroup, TablePolicy, from_spec, invariant_factors, primary_decomposition
from .invariants import (
    build_corollary32,
    build_theorem31,
    d_star,
    davenport_upper_bound,
    girard_bound,
    k_star,
    verify_claims,
)
from .parallel import parallel_sea
from .search import (
    Budget,
    Mode,
    SearchFrontier,
    SearchReport,
    davenport_exact,
    exists_split,
    girard_check,
    sca,
    sea,
)
from .sequence import (
    Sequence,
    SubsumSet,
    cross_number,
    forbidden_set,
    is_minimal_zero_sum,
    is_zero_sum_free,
    savchev_chen_decompose,
    sigma,
    subsums,
)

__version__ = "0.1.0"
