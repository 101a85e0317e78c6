"""Series solutions, existence bounds and stability checks for differential
equations with proportional delay, of integer and Caputo-fractional order."""

from .errors import (
    AlphaMismatch,
    DimError,
    DomainError,
    FormatError,
    PoleError,
    ProdelayError,
    Unconverged,
)
from .series import PowerSeries, Scalar, VectorSeries, as_scalar
from .specfun import (
    MultiIndex,
    gamma,
    lambert_w0,
    mittag_leffler,
    multi_mittag_leffler,
    multinomial,
)
from .sam import (
    BoundsReport,
    PolyRHS,
    ProblemSpec,
    Rectangle,
    ResidualReport,
    SolveResult,
    bounds_report,
    convergence_bound,
    existence_interval,
    lipschitz_constants,
    picard_step,
    problem_from_json,
    residual_check,
    solve,
    sup_bound_M,
    system_existence_interval,
)
from .closedform import (
    AmbartsumianParams,
    PantographParams,
    SandwichReport,
    SquareMatrix,
    ambartsumian_series,
    ambartsumian_system_series,
    pantograph_series,
    pantograph_system_series,
    sandwich_check,
)
from .stability import (
    DecayReport,
    StabilityQuery,
    StabilityReport,
    char_root_rightmost,
    decay_probe,
    pantograph_stable,
    scan_char_roots,
)

__version__ = "0.1.0"

__all__ = [
    "AlphaMismatch", "AmbartsumianParams", "BoundsReport", "DecayReport",
    "DimError", "DomainError", "FormatError", "MultiIndex", "PantographParams",
    "PoleError", "PolyRHS", "PowerSeries", "ProblemSpec", "ProdelayError",
    "Rectangle", "ResidualReport", "SandwichReport", "Scalar", "SolveResult",
    "SquareMatrix", "StabilityQuery", "StabilityReport", "Unconverged",
    "VectorSeries", "ambartsumian_series", "ambartsumian_system_series",
    "as_scalar", "bounds_report", "char_root_rightmost", "convergence_bound",
    "decay_probe", "existence_interval", "gamma", "lambert_w0",
    "lipschitz_constants", "mittag_leffler", "multi_mittag_leffler",
    "multinomial", "pantograph_series", "pantograph_stable",
    "pantograph_system_series", "picard_step", "problem_from_json",
    "residual_check", "sandwich_check", "scan_char_roots", "solve",
    "sup_bound_M", "system_existence_interval",
]
