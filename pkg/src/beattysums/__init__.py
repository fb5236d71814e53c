"""beattysums: counting sums of Beatty primes and checking the machinery behind them."""

__version__ = "0.1.0"

from .beatty import BeattySequence
from .diophantine import (
    ContinuedFraction,
    RadicalSum,
    RationalApprox,
    TypeScanReport,
    continued_fraction,
    convergent_approx,
    linear_form,
    type_scan,
)
from .errors import (
    BeattysumsError,
    InvalidWidth,
    LimitTooLarge,
    NotRepresentable,
    ParseError,
    PrecisionExhausted,
    ToleranceUnreachable,
    ValidationError,
    ZeroVector,
)
from .expsums import (
    AnalysisParams,
    FareyArc,
    ModulationVector,
    R_nm,
    S_grid,
    S_point,
    farey_arcs,
    fourier_expansion_check,
    parseval_check,
)
from .primes import PrimeTable, log_weight_array, sieve
from .reals import (
    IntervalReal,
    RealExpr,
    decide_floor,
    decide_frac,
    floor_interval,
    frac_interval,
    make_const,
    make_quadratic,
    make_rational,
    make_sqrt,
    parse_real,
    to_float,
)
from .representations import (
    RepresentationTable,
    brute_force_table,
    count_all_upto,
    count_exact,
    exceptional_scan,
    smoothed_count,
    smoothed_sandwich,
)
from .singular import SingularSeriesValue, main_term, singular_series
from .smoothing import SmoothedIndicator
from .smoothing import build as build_smoothed
