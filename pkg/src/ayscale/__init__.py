"""Exact arithmetic for the cubic Arnoux-Yoccoz interval exchange, its
renormalization coding, and the arithmetic of the scaling shift's periodic
points."""

from .field import (
    FieldElement,
    IsolatingInterval,
    LAM,
    LAM2,
    OMEGA,
    OMEGA_INV,
    ONE,
    Rational,
    ResidueElement,
    ZERO,
    min_integer_multiple,
    numeric_constants,
    residue_mul,
    residue_reduce,
)
from .iet import (
    IETTable,
    Interval,
    canonical_table,
    derive_path_data,
    first_return,
    interval_index,
    rho,
    scaling_conjugacy_check,
    verify_permutation,
)
from .coding import (
    DIGITS,
    FORBIDDEN_TAILS,
    SYMBOLS,
    InadmissibleCodeError,
    PeriodicCode,
    Symbol,
    Tile,
    allowed_fixed_symbols,
    char_poly,
    char_poly_check,
    decode,
    digit,
    digit_alphabet,
    encode,
    encode_rational,
    forbidden_tails,
    gamma,
    incidence_matrix,
    level_tiles,
    tile_of,
)
from .cycles import (
    Cycle,
    CycleData,
    CycleSetStats,
    CoreHistogram,
    boundary_family,
    core_histogram,
    count_fixed,
    cycle_arrays,
    embed,
    fix_count_closed_form,
    fix_count_trace,
    i_n_size,
    iter_cycles,
    m_n,
    stats,
)
from .orders import (
    OrderBound,
    SplittingReport,
    cebotarev_frequencies,
    cyclotomic_check,
    denominator_survey,
    order_of,
    splitting_type,
    t_bound,
    t_prime_power,
)
from .errors import BudgetExceededError

__version__ = "0.1.0"
