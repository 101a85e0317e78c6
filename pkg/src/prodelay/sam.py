"""Successive-approximation engine for scalar proportional-delay IVPs.

Solves y'(t) = f(t, y(t), y(q*t)) (and the Caputo-fractional analog
D^alpha y = f) for polynomial right-hand sides, by iterating

    phi_{k+1} = y0 + I^alpha[ f(., phi_k(.), phi_k(q.)) ]

on truncated power series, starting from the constant phi_0 = y0.  Also
provides the companion calculators: the sup bound M of f on a rectangle,
Lipschitz constants, the existence radius, the iterate error bound, and the
integral-equation residual check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

from . import specfun
from .errors import AlphaMismatch, DimError, DomainError, FormatError
from .series import PowerSeries, Scalar, as_scalar, scalar_from_json


@dataclass(frozen=True)
class PolyRHS:
    """Polynomial right-hand side f(t, y, yq) = sum c * t**i * y**j * yq**k.

    ``terms`` holds (c, i, j, k) tuples; duplicates on (i, j, k) are merged
    and zero coefficients dropped.  ``q`` is the proportional-delay factor,
    0 < q < 1 (a delayed argument t/q with q > 1 is expressed by passing the
    reciprocal).
    """

    terms: tuple[tuple[Scalar, int, int, int], ...]
    q: Scalar

    def __post_init__(self):
        q = as_scalar(self.q)
        if not 0 < q < 1:
            raise DomainError(f"delay factor q must lie in (0, 1), got {q}")
        merged: dict[tuple[int, int, int], Scalar] = {}
        for term in self.terms:
            c, i, j, k = term
            c = as_scalar(c)
            for name, p in (("t", i), ("y", j), ("yq", k)):
                if not isinstance(p, int) or isinstance(p, bool) or p < 0:
                    raise ValueError(f"{name} power must be a non-negative integer, got {p}")
            key = (i, j, k)
            merged[key] = merged.get(key, Fraction(0)) + c
        normalized = tuple(
            (c, i, j, k) for (i, j, k), c in sorted(merged.items()) if c != 0
        )
        object.__setattr__(self, "terms", normalized)
        object.__setattr__(self, "q", q)

    def is_exact(self) -> bool:
        return isinstance(self.q, Fraction) and all(
            isinstance(c, Fraction) for c, _, _, _ in self.terms
        )


@dataclass(frozen=True)
class ProblemSpec:
    """A scalar IVP: right-hand side, order, initial value, truncation, iteration cap."""

    rhs: PolyRHS
    alpha: Scalar
    y0: Scalar
    trunc: int
    iters: int

    def __post_init__(self):
        alpha = as_scalar(self.alpha)
        if not 0 < alpha <= 1:
            raise DomainError(f"alpha must lie in (0, 1], got {alpha}")
        if self.trunc < 1:
            raise ValueError(f"trunc must be >= 1, got {self.trunc}")
        if self.iters < 1:
            raise ValueError(f"iters must be >= 1, got {self.iters}")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "y0", as_scalar(self.y0))


@dataclass(frozen=True)
class Rectangle:
    """The box |t| <= t_radius, |y - y0| <= y_radius on which f is bounded.

    ``y_radius`` is a single scalar for scalar problems or a tuple of
    per-component radii for systems.
    """

    t_radius: Scalar
    y_radius: Scalar | tuple[Scalar, ...]

    def __post_init__(self):
        t_radius = as_scalar(self.t_radius)
        if t_radius <= 0:
            raise DomainError(f"t_radius must be positive, got {t_radius}")
        yr = self.y_radius
        if isinstance(yr, (tuple, list)):
            yr = tuple(as_scalar(b) for b in yr)
            if not yr or any(b <= 0 for b in yr):
                raise DomainError("every y_radius component must be positive")
        else:
            yr = as_scalar(yr)
            if yr <= 0:
                raise DomainError(f"y_radius must be positive, got {yr}")
        object.__setattr__(self, "t_radius", t_radius)
        object.__setattr__(self, "y_radius", yr)

    def scalar_y_radius(self) -> Scalar:
        if isinstance(self.y_radius, tuple):
            raise DomainError("this operation needs a scalar y_radius")
        return self.y_radius


@dataclass(frozen=True)
class BoundsReport:
    """Sup bound M, Lipschitz constants and existence radius for one problem."""

    M: Scalar
    L1: Scalar
    L2: Scalar
    zeta: Scalar


class SolveResult(NamedTuple):
    series: PowerSeries
    iterations: int
    stabilized: bool


@dataclass(frozen=True)
class ResidualReport:
    """Outcome of the integral-equation residual check.

    ``clean`` means every residual coefficient through the truncation order
    is zero (exact mode) or below ``threshold`` (float mode);
    ``first_order`` is the lowest violating grid index otherwise.
    """

    clean: bool
    first_order: int | None
    max_abs: float
    threshold: float


# -- right-hand side composition on series ---------------------------------


def _t_power_index(i: int, alpha: Scalar) -> int:
    """Grid index d with t**i == t**(d*alpha), or AlphaMismatch if off-grid."""
    if i == 0:
        return 0
    if alpha == 1:
        return i
    if isinstance(alpha, Fraction):
        d = Fraction(i) / alpha
        if d.denominator != 1:
            raise AlphaMismatch(f"t**{i} is off the alpha={alpha} exponent grid")
        return int(d)
    d = i / float(alpha)
    nearest = round(d)
    if abs(d - nearest) > 1e-9:
        raise AlphaMismatch(f"t**{i} is off the alpha={alpha} exponent grid")
    return nearest


def compose_rhs(rhs: PolyRHS, y: PowerSeries, yq: PowerSeries) -> PowerSeries:
    """Series of f(t, y(t), yq(t)) truncated at min(y.trunc, yq.trunc)."""
    if y.alpha != yq.alpha:
        raise AlphaMismatch("y and yq must share an exponent grid")
    n = min(y.trunc, yq.trunc)
    y = y.truncated(n)
    yq = yq.truncated(n)

    max_j = max((j for _, _, j, _ in rhs.terms), default=0)
    max_k = max((k for _, _, _, k in rhs.terms), default=0)
    ypow: list[PowerSeries | None] = [None] * (max_j + 1)
    yqpow: list[PowerSeries | None] = [None] * (max_k + 1)
    for j in range(1, max_j + 1):
        ypow[j] = y if j == 1 else ypow[j - 1] * y
    for k in range(1, max_k + 1):
        yqpow[k] = yq if k == 1 else yqpow[k - 1] * yq

    out: list[Scalar] = [Fraction(0)] * (n + 1)
    for c, i, j, k in rhs.terms:
        d = _t_power_index(i, y.alpha)
        if d > n:
            continue
        if j == 0 and k == 0:
            out[d] += c
            continue
        if j == 0:
            base = yqpow[k]
        elif k == 0:
            base = ypow[j]
        else:
            base = ypow[j] * yqpow[k]
        for m, cm in enumerate(base.coeffs):
            if m + d > n:
                break
            out[m + d] += c * cm
    return PowerSeries(y.alpha, tuple(out))


# -- the Picard engine ------------------------------------------------------


def picard_step(phi: PowerSeries, spec: ProblemSpec) -> PowerSeries:
    """One successive-approximation step: y0 + I^alpha[f(., phi, phi(q.))]."""
    if phi.alpha != spec.alpha:
        raise AlphaMismatch(
            f"iterate grid alpha={phi.alpha} does not match problem alpha={spec.alpha}"
        )
    if phi.trunc < spec.trunc:
        raise ValueError("iterate truncation is below the problem truncation")
    phi = phi.truncated(spec.trunc)
    yq = phi.scale_argument(spec.rhs.q)
    f = compose_rhs(spec.rhs, phi, yq)
    integrated = f.frac_integrate().truncated(spec.trunc)
    return PowerSeries.constant(spec.y0, spec.alpha, spec.trunc) + integrated


# float-mode stabilization: relative 1e-13 per coefficient, absolute floor
# tucked just above accumulated Cauchy-product noise
_STAB_REL = 1e-13
_STAB_ABS = 1e-300


def _coeffs_stable(prev: PowerSeries, new: PowerSeries) -> bool:
    if prev.is_exact and new.is_exact:
        return prev.coeffs == new.coeffs
    for a, b in zip(prev.coeffs, new.coeffs):
        a = float(a)
        b = float(b)
        if abs(a - b) > max(_STAB_REL * max(abs(a), abs(b)), _STAB_ABS):
            return False
    return True


def solve(spec: ProblemSpec) -> SolveResult:
    """Iterate picard_step from phi_0 = y0 until the coefficients stop moving.

    Stabilization means every coefficient through ``spec.trunc`` is unchanged
    between consecutive iterates (exactly in rational mode, to 1e-13 relative
    in float mode).  Running out of iterations is reported via the flag, not
    raised.
    """
    phi = PowerSeries.constant(spec.y0, spec.alpha, spec.trunc)
    for k in range(1, spec.iters + 1):
        nxt = picard_step(phi, spec)
        if _coeffs_stable(phi, nxt):
            return SolveResult(nxt, k, True)
        phi = nxt
    return SolveResult(phi, spec.iters, False)


# -- bound calculators -------------------------------------------------------


def sup_bound_M(rhs: PolyRHS, y0, rect: Rectangle) -> Scalar:
    """Triangle-inequality bound sum |c| a**i (|y0|+b)**(j+k) for |f| on the rectangle.

    Rigorous but not tight.
    """
    y0 = as_scalar(y0)
    a = rect.t_radius
    b = rect.scalar_y_radius()
    reach = abs(y0) + b
    total: Scalar = Fraction(0)
    for c, i, j, k in rhs.terms:
        total = total + abs(c) * a ** i * reach ** (j + k)
    return total


def lipschitz_constants(rhs: PolyRHS, y0, rect: Rectangle) -> tuple[Scalar, Scalar]:
    """Bounds (L1, L2) of |df/dy| and |df/dyq| on the rectangle, term by term."""
    y0 = as_scalar(y0)
    a = rect.t_radius
    b = rect.scalar_y_radius()
    reach = abs(y0) + b
    l1: Scalar = Fraction(0)
    l2: Scalar = Fraction(0)
    for c, i, j, k in rhs.terms:
        if j >= 1:
            l1 = l1 + abs(c) * j * a ** i * reach ** (j - 1 + k)
        if k >= 1:
            l2 = l2 + abs(c) * k * a ** i * reach ** (j + k - 1)
    return l1, l2


def existence_interval(M, rect: Rectangle, alpha) -> Scalar:
    """Existence radius: min{a, b/M} for alpha = 1, else
    min{a, (Gamma(alpha+1) b / M)**(1/alpha)}.  M = 0 leaves only a."""
    M = as_scalar(M)
    if M < 0:
        raise DomainError(f"M must be >= 0, got {M}")
    alpha = as_scalar(alpha)
    a = rect.t_radius
    if M == 0:
        return a
    b = rect.scalar_y_radius()
    if alpha == 1:
        return min(a, b / M)
    af = float(alpha)
    radius = (specfun.gamma(af + 1.0) * float(b) / float(M)) ** (1.0 / af)
    return a if float(a) <= radius else radius


def system_existence_interval(M, rect: Rectangle, alphas: Sequence) -> Scalar:
    """Minimum of the t radius and every per-component fractional radius."""
    M = as_scalar(M)
    if M < 0:
        raise DomainError(f"M must be >= 0, got {M}")
    alphas = [as_scalar(al) for al in alphas]
    if not alphas or any(not 0 < al <= 1 for al in alphas):
        raise DomainError("every order alpha_i must lie in (0, 1]")
    radii = rect.y_radius
    if not isinstance(radii, tuple):
        radii = (radii,) * len(alphas)
    if len(radii) != len(alphas):
        raise DimError(f"{len(radii)} y radii for {len(alphas)} component orders")
    zeta = rect.t_radius
    if M == 0:
        return zeta
    for b, al in zip(radii, alphas):
        if al == 1:
            r: Scalar = b / M
        else:
            af = float(al)
            r = (specfun.gamma(af + 1.0) * float(b) / float(M)) ** (1.0 / af)
        if r < zeta:
            zeta = r
    return zeta


def convergence_bound(M, L1, L2, n: int, t, alpha=1) -> Scalar:
    """Iterate-difference bound M (L1+L2)**(n-1) |t|**n / n!.

    This is the proven bound on |phi_n - phi_{n-1}| for alpha = 1.  For
    alpha < 1 the returned value is the natural extrapolation
    M (L1+L2)**(n-1) |t|**(n*alpha) / Gamma(n*alpha + 1); treat it as an
    estimate, not a certified bound.
    """
    if n < 1:
        raise DomainError(f"iterate index must be >= 1, got {n}")
    M = as_scalar(M)
    lsum = as_scalar(L1) + as_scalar(L2)
    t = as_scalar(t)
    alpha = as_scalar(alpha)
    if alpha == 1:
        return M * lsum ** (n - 1) * abs(t) ** n / math.factorial(n)
    af = float(alpha)
    return (
        float(M)
        * float(lsum) ** (n - 1)
        * abs(float(t)) ** (n * af)
        * specfun.recip_gamma(n * af + 1.0)
    )


def bounds_report(spec: ProblemSpec, rect: Rectangle) -> BoundsReport:
    """M, L1, L2 and zeta for one problem on one rectangle."""
    M = sup_bound_M(spec.rhs, spec.y0, rect)
    l1, l2 = lipschitz_constants(spec.rhs, spec.y0, rect)
    zeta = existence_interval(M, rect, spec.alpha)
    return BoundsReport(M=M, L1=l1, L2=l2, zeta=zeta)


def residual_check(y: PowerSeries, spec: ProblemSpec, tol: float | None = None) -> ResidualReport:
    """Coefficients of r = y - y0 - I^alpha[f(., y, y(q.))] through spec.trunc.

    A true (truncated) solution leaves every coefficient zero.  In float mode
    coefficients below ``tol`` count as zero; the default scales 1e-12 by the
    largest coefficient magnitude of y.
    """
    if y.alpha != spec.alpha:
        raise AlphaMismatch(
            f"series grid alpha={y.alpha} does not match problem alpha={spec.alpha}"
        )
    n = min(y.trunc, spec.trunc)
    ys = y.truncated(n)
    yq = ys.scale_argument(spec.rhs.q)
    f = compose_rhs(spec.rhs, ys, yq)
    integrated = f.frac_integrate().truncated(n)
    r = ys - PowerSeries.constant(spec.y0, spec.alpha, n) - integrated
    if tol is None:
        if r.is_exact:
            tol = 0.0
        else:
            tol = 1e-12 * max(1.0, max(abs(float(c)) for c in ys.coeffs))
    first = None
    worst = 0.0
    for m, c in enumerate(r.coeffs):
        mag = abs(float(c))
        if mag > tol:
            if first is None:
                first = m
            worst = max(worst, mag)
    return ResidualReport(clean=first is None, first_order=first, max_abs=worst,
                          threshold=tol)


# -- problem-file parsing ----------------------------------------------------


def problem_from_json(doc) -> ProblemSpec:
    """Build a ProblemSpec from the JSON problem format.

    Expected shape: {"alpha": num|"p/q", "q": ..., "y0": ..., "trunc": int,
    "iters": int, "rhs": [{"c": ..., "t": int, "y": int, "yq": int}, ...]}.
    """
    if not isinstance(doc, dict):
        raise FormatError("problem: expected a JSON object")
    for field in ("alpha", "q", "y0", "trunc", "iters", "rhs"):
        if field not in doc:
            raise FormatError(f"{field}: missing")
    alpha = scalar_from_json(doc["alpha"], "alpha")
    q = scalar_from_json(doc["q"], "q")
    y0 = scalar_from_json(doc["y0"], "y0")
    for field in ("trunc", "iters"):
        if not isinstance(doc[field], int) or isinstance(doc[field], bool):
            raise FormatError(f"{field}: expected an integer, got {doc[field]!r}")
    raw_terms = doc["rhs"]
    if not isinstance(raw_terms, list):
        raise FormatError("rhs: expected an array of term objects")
    terms = []
    for idx, entry in enumerate(raw_terms):
        if not isinstance(entry, dict):
            raise FormatError(f"rhs[{idx}]: expected an object")
        for field in ("c", "t", "y", "yq"):
            if field not in entry:
                raise FormatError(f"rhs[{idx}].{field}: missing")
        c = scalar_from_json(entry["c"], f"rhs[{idx}].c")
        powers = []
        for field in ("t", "y", "yq"):
            p = entry[field]
            if not isinstance(p, int) or isinstance(p, bool) or p < 0:
                raise FormatError(f"rhs[{idx}].{field}: expected a non-negative integer")
            powers.append(p)
        terms.append((c, *powers))
    try:
        rhs = PolyRHS(tuple(terms), q)
        return ProblemSpec(rhs=rhs, alpha=alpha, y0=y0,
                           trunc=doc["trunc"], iters=doc["iters"])
    except (DomainError, ValueError) as exc:
        raise FormatError(str(exc)) from None
