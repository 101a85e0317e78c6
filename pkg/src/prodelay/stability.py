"""Stability predicates for proportional-delay equations.

Three tools, in increasing order of effort:

* :func:`pantograph_stable` - the sum criterion a + b < 0, a sufficient
  condition for asymptotic stability of the linear pantograph equation.
* :func:`char_root_rightmost` - the frozen-delay test: sign of the rightmost
  root of lambda - a - b*exp(-lambda*tau) = 0 with tau fixed at tau* =
  (1-q)*t0.  Solved in closed form through the Lambert W function when the
  principal branch applies, otherwise by a complex grid scan with Newton
  polish.  For the time-varying delay this certifies stability only near t0,
  on a finite interval; it is never promoted to an asymptotic claim.
* :func:`decay_probe` - an explicitly observational envelope check of |y(t)|
  on a grid, guarded by a term-doubling convergence test.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

from .errors import DomainError, Unconverged
from .series import PowerSeries
from .specfun import lambert_w0

_BRANCH_POINT = -math.exp(-1.0)
_ROOT_RESIDUAL = 1e-9


@dataclass(frozen=True)
class StabilityQuery:
    """Linearization data: a = df/dy, b = df/dyq at equilibrium, frozen delay tau*."""

    a: float
    b: float
    tau_star: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))
        tau = float(self.tau_star)
        if tau < 0:
            raise DomainError(f"frozen delay must be >= 0, got {tau}")
        object.__setattr__(self, "tau_star", tau)


@dataclass(frozen=True)
class StabilityReport:
    """Outcome of a characteristic-root test.

    ``stable`` is None when a scan was inconclusive at its resolution.  Any
    reported root satisfies |root - a - b*exp(-root*tau)| <= 1e-9.
    """

    stable: bool | None
    method: str
    rightmost_root: complex | None
    margin: float
    note: str = ""


def pantograph_stable(a, b) -> bool:
    """Sufficient sum criterion: a + b < 0.

    A False return means "not concluded stable", not "unstable".
    """
    return float(a) + float(b) < 0


def _char(lam: complex, a: float, b: float, tau: float) -> complex:
    return lam - a - b * cmath.exp(-lam * tau)


def _char_deriv(lam: complex, b: float, tau: float) -> complex:
    return 1.0 + b * tau * cmath.exp(-lam * tau)


def _polish(lam: complex, a: float, b: float, tau: float) -> complex | None:
    for _ in range(60):
        h = _char(lam, a, b, tau)
        if abs(h) <= 1e-12 * max(1.0, abs(lam)):
            return lam
        d = _char_deriv(lam, b, tau)
        if d == 0:
            return None
        lam = lam - h / d
        if not (math.isfinite(lam.real) and math.isfinite(lam.imag)):
            return None
    return lam if abs(_char(lam, a, b, tau)) <= _ROOT_RESIDUAL else None


def scan_char_roots(a: float, b: float, tau: float,
                    re_lo: float | None = None, re_hi: float | None = None,
                    im_hi: float | None = None,
                    re_points: int = 400, im_points: int = 400) -> list[complex]:
    """Roots of the frozen-delay characteristic function inside a rectangle.

    Samples |h| on a grid over [re_lo, re_hi] x [0, im_hi] (defaults:
    re in [a-|b|-1, a+|b|+1], im up to 4*pi/tau - a documented heuristic that
    covers the rightmost branches for moderate parameters), Newton-polishes
    every local minimum, and keeps the distinct residual-verified roots.
    """
    if tau <= 0:
        raise DomainError("the root scan needs tau > 0")
    if re_lo is None:
        re_lo = a - abs(b) - 1.0
    if re_hi is None:
        re_hi = a + abs(b) + 1.0
    if im_hi is None:
        im_hi = 4.0 * math.pi / tau
    res = [re_lo + (re_hi - re_lo) * i / (re_points - 1) for i in range(re_points)]
    ims = [im_hi * j / (im_points - 1) for j in range(im_points)]
    mag = [[abs(_char(complex(r, s), a, b, tau)) for r in res] for s in ims]

    candidates = []
    for si in range(im_points):
        row = mag[si]
        for ri in range(re_points):
            v = row[ri]
            if ri > 0 and row[ri - 1] < v:
                continue
            if ri + 1 < re_points and row[ri + 1] < v:
                continue
            if si > 0 and mag[si - 1][ri] < v:
                continue
            if si + 1 < im_points and mag[si + 1][ri] < v:
                continue
            candidates.append(complex(res[ri], ims[si]))

    roots: list[complex] = []
    for cand in candidates:
        root = _polish(cand, a, b, tau)
        if root is None or abs(_char(root, a, b, tau)) > _ROOT_RESIDUAL:
            continue
        if root.imag < 0:
            root = root.conjugate()
        if all(abs(root - r) > 1e-6 for r in roots):
            roots.append(root)
    return roots


def char_root_rightmost(query: StabilityQuery, method: str = "auto",
                        re_points: int = 400, im_points: int = 400) -> StabilityReport:
    """Rightmost root of lambda - a - b*exp(-lambda*tau*) = 0 and its sign.

    tau* = 0 collapses the test to the sum a + b.  For tau* > 0 the rightmost
    root is a + W0(b tau* e**(-a tau*))/tau* whenever the Lambert argument is
    >= -1/e; below the branch point the rightmost roots are a complex pair
    and a grid scan takes over.  ``method`` may force "lambert-w" or
    "root-scan" where applicable.
    """
    a, b, tau = query.a, query.b, query.tau_star
    if method not in ("auto", "sum-criterion", "lambert-w", "root-scan"):
        raise ValueError(f"unknown method {method!r}")

    if tau == 0.0:
        root = a + b
        return StabilityReport(
            stable=root < 0, method="sum-criterion", rightmost_root=complex(root, 0.0),
            margin=abs(root), note="zero delay: characteristic root is a + b",
        )
    if method == "sum-criterion":
        raise DomainError("sum-criterion applies only at tau* = 0")

    if method in ("auto", "lambert-w"):
        x = b * tau * math.exp(-a * tau)
        if x >= _BRANCH_POINT:
            root_re = a + lambert_w0(x) / tau
            root = complex(root_re, 0.0)
            resid = abs(_char(root, a, b, tau))
            if resid <= _ROOT_RESIDUAL:
                return StabilityReport(
                    stable=root_re < 0, method="lambert-w", rightmost_root=root,
                    margin=abs(root_re),
                    note="principal-branch Lambert W root, residual-verified",
                )
        if method == "lambert-w":
            raise DomainError(
                "Lambert argument below -1/e: rightmost roots are complex; use root-scan"
            )

    roots = scan_char_roots(a, b, tau, re_points=re_points, im_points=im_points)
    if not roots:
        return StabilityReport(
            stable=None, method="root-scan", rightmost_root=None, margin=0.0,
            note="inconclusive at resolution: no residual-verified root in the scan window",
        )
    rightmost = max(roots, key=lambda r: r.real)
    return StabilityReport(
        stable=rightmost.real < 0, method="root-scan", rightmost_root=rightmost,
        margin=abs(rightmost.real),
        note=f"{len(roots)} distinct roots located in the scan window",
    )


@dataclass(frozen=True)
class DecayReport:
    """Observational |y(t)| envelope over a grid; not a stability proof."""

    trend: str  # "decreasing" | "increasing" | "mixed"
    initial: float
    final: float
    decayed: bool
    points: int
    note: str = "observational envelope check, not a proof"


def decay_probe(series: PowerSeries, horizon, safe_frac: float = 1.0,
                points: int = 101) -> DecayReport:
    """Envelope trend of |y(t)| on [0, safe_frac*horizon].

    Refuses to run (raises :class:`Unconverged`) unless doubling the term
    count from half to full moves the value at *horizon* by less than
    1e-12 relative - the truncated series must have converged on the whole
    window before its values mean anything.
    """
    horizon = float(horizon)
    if horizon <= 0:
        raise DomainError(f"horizon must be positive, got {horizon}")
    if not 0 < safe_frac <= 1:
        raise DomainError(f"safe_frac must lie in (0, 1], got {safe_frac}")
    if points < 2:
        raise DomainError(f"need at least 2 grid points, got {points}")
    full = float(series.eval(horizon))
    half = float(series.truncated(series.trunc // 2).eval(horizon))
    if abs(full - half) > 1e-12 * max(1.0, abs(full)):
        raise Unconverged(
            f"series not converged at horizon {horizon}: half-term value {half!r} "
            f"vs full value {full!r}"
        )
    values = [abs(float(series.eval(safe_frac * horizon * i / (points - 1))))
              for i in range(points)]
    scale = max(values)
    tol = 1e-12 * max(1.0, scale)
    rising = any(b - a > tol for a, b in zip(values, values[1:]))
    falling = any(a - b > tol for a, b in zip(values, values[1:]))
    if rising and falling:
        trend = "mixed"
    elif rising:
        trend = "increasing"
    else:
        trend = "decreasing"
    decayed = scale <= 1e-300 or values[-1] < values[0] - tol
    return DecayReport(trend=trend, initial=values[0], final=values[-1],
                       decayed=decayed, points=points)
