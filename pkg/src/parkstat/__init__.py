"""Exact computation and simulation for parking functions under the
coin-flip protocol."""

from .errors import (
    CoinsExhausted,
    IdentityFailure,
    SizeLimit,
    SupportMismatch,
    ZeroBaseNegativeExponent,
)
from .exactprob import (
    VacancyTable,
    last_pref_distribution_bruteforce,
    park_probability,
    total_pf_mass,
    vacancy_table,
)
from .formulas import (
    AbelParams,
    RationalDist,
    abel_sum,
    last_pref_distribution,
    last_pref_distribution_half,
    last_pref_mean_asymptotic,
    last_pref_mean_exact,
    tv_bounds_check,
    tv_distance,
)
from .lucky import (
    TriangleTable,
    a220884_rows,
    classical_lucky_generating,
    q_generating_polynomial,
    unlucky_distribution_bruteforce,
    unlucky_expected_circular,
    unlucky_expected_linear,
    weighted_pascal,
)
from .montecarlo import SimConfig, SimReport, histogram_vs_exact, run_simulation, sweep_p
from .poly import Poly
from .protocol import (
    HEADS,
    TAILS,
    Coin,
    ParkingResult,
    PreferenceVector,
    Street,
    StreetKind,
    classical_is_pf,
    park_deterministic,
)

__version__ = "0.1.0"

__all__ = [
    "a220884_rows",
    "abel_sum",
    "AbelParams",
    "classical_is_pf",
    "classical_lucky_generating",
    "Coin",
    "CoinsExhausted",
    "HEADS",
    "histogram_vs_exact",
    "IdentityFailure",
    "last_pref_distribution",
    "last_pref_distribution_bruteforce",
    "last_pref_distribution_half",
    "last_pref_mean_asymptotic",
    "last_pref_mean_exact",
    "park_deterministic",
    "park_probability",
    "ParkingResult",
    "Poly",
    "PreferenceVector",
    "q_generating_polynomial",
    "RationalDist",
    "run_simulation",
    "SimConfig",
    "SimReport",
    "SizeLimit",
    "Street",
    "StreetKind",
    "SupportMismatch",
    "sweep_p",
    "TAILS",
    "total_pf_mass",
    "TriangleTable",
    "tv_bounds_check",
    "tv_distance",
    "unlucky_distribution_bruteforce",
    "unlucky_expected_circular",
    "unlucky_expected_linear",
    "vacancy_table",
    "VacancyTable",
    "weighted_pascal",
    "ZeroBaseNegativeExponent",
]
