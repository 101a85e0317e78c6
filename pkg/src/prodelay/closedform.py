"""Closed-form series solutions for pantograph and Ambartsumian equations.

The scalar pantograph equation y' = a y(t) + b y(q t), y(0) = y0 with
0 < q < 1 has the everywhere-convergent solution

    y(t) = y0 * sum_m  t**(m*alpha) / Gamma(m*alpha + 1)
                * prod_{j=0}^{m-1} (a + b * q**(alpha*j)),

with the empty product equal to 1 (alpha = 1 gives plain m! denominators).
The Ambartsumian equation y' = -y(t) + (1/q) y(t/q), q > 1, has the analog
with product factors (q**-(1 + alpha*j) - 1).  Commensurate linear systems
replace the scalar product by an ordered matrix product applied to the
initial vector.

All coefficients are built incrementally - one multiply per order - and stay
exact rationals whenever alpha = 1 and the inputs are rational.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import specfun
from .errors import DimError, DomainError, FormatError
from .series import (
    PowerSeries,
    Scalar,
    VectorSeries,
    as_scalar,
    scalar_from_json,
)


@dataclass(frozen=True)
class PantographParams:
    a: Scalar
    b: Scalar
    q: Scalar
    alpha: Scalar = Fraction(1)
    y0: Scalar = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "a", as_scalar(self.a))
        object.__setattr__(self, "b", as_scalar(self.b))
        q = as_scalar(self.q)
        if not 0 < q < 1:
            raise DomainError(f"pantograph delay factor q must lie in (0, 1), got {q}")
        alpha = as_scalar(self.alpha)
        if not 0 < alpha <= 1:
            raise DomainError(f"alpha must lie in (0, 1], got {alpha}")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "y0", as_scalar(self.y0))


@dataclass(frozen=True)
class AmbartsumianParams:
    q: Scalar
    alpha: Scalar = Fraction(1)
    lam: Scalar = Fraction(1)

    def __post_init__(self):
        q = as_scalar(self.q)
        if q <= 1:
            raise DomainError(f"Ambartsumian delay parameter q must exceed 1, got {q}")
        alpha = as_scalar(self.alpha)
        if not 0 < alpha <= 1:
            raise DomainError(f"alpha must lie in (0, 1], got {alpha}")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "lam", as_scalar(self.lam))


@dataclass(frozen=True)
class SquareMatrix:
    rows: tuple[tuple[Scalar, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(as_scalar(v) for v in row) for row in self.rows)
        n = len(rows)
        if n < 1:
            raise DimError("matrix must have at least one row")
        if any(len(row) != n for row in rows):
            raise DimError("matrix must be square")
        if not all(isinstance(v, Fraction) for row in rows for v in row):
            rows = tuple(tuple(float(v) for v in row) for row in rows)
        object.__setattr__(self, "rows", rows)

    @property
    def dim(self) -> int:
        return len(self.rows)

    @classmethod
    def identity(cls, n: int) -> "SquareMatrix":
        one, zero = Fraction(1), Fraction(0)
        return cls(tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n)))

    def _check_dim(self, other: "SquareMatrix") -> None:
        if self.dim != other.dim:
            raise DimError(f"matrix dimensions differ: {self.dim} vs {other.dim}")

    def __add__(self, other: "SquareMatrix") -> "SquareMatrix":
        self._check_dim(other)
        return SquareMatrix(tuple(
            tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(self.rows, other.rows)
        ))

    def __neg__(self) -> "SquareMatrix":
        return SquareMatrix(tuple(tuple(-v for v in row) for row in self.rows))

    def scaled(self, s) -> "SquareMatrix":
        s = as_scalar(s)
        return SquareMatrix(tuple(tuple(v * s for v in row) for row in self.rows))

    def __matmul__(self, other: "SquareMatrix") -> "SquareMatrix":
        self._check_dim(other)
        n = self.dim
        cols = tuple(zip(*other.rows))
        return SquareMatrix(tuple(
            tuple(sum(a * b for a, b in zip(row, col)) for col in cols)
            for row in self.rows
        ))

    def matvec(self, vec: Sequence) -> tuple[Scalar, ...]:
        if len(vec) != self.dim:
            raise DimError(f"vector length {len(vec)} does not match dimension {self.dim}")
        v = tuple(as_scalar(x) for x in vec)
        return tuple(sum(a * b for a, b in zip(row, v)) for row in self.rows)


def _denominators(alpha: Scalar, terms: int, exact: bool) -> list:
    """Gamma(m*alpha + 1) for m < terms: exact factorials when alpha == 1."""
    if exact:
        out = []
        fact = 1
        for m in range(terms):
            if m:
                fact *= m
            out.append(Fraction(fact))
        return out
    af = float(alpha)
    return [1.0 / specfun.recip_gamma(m * af + 1.0) for m in range(terms)]


def pantograph_series(p: PantographParams, terms: int) -> PowerSeries:
    """Truncated closed-form pantograph solution with *terms* coefficients."""
    if terms < 1:
        raise DomainError(f"terms must be >= 1, got {terms}")
    exact = p.alpha == 1 and all(
        isinstance(v, Fraction) for v in (p.a, p.b, p.q, p.y0)
    )
    if exact:
        a, b, qstep = p.a, p.b, p.q
        prod: Scalar = Fraction(1)
        qpow: Scalar = Fraction(1)
    else:
        a, b = float(p.a), float(p.b)
        qstep = float(p.q) ** float(p.alpha)
        prod = 1.0
        qpow = 1.0
    denoms = _denominators(p.alpha, terms, exact)
    coeffs = []
    for m in range(terms):
        coeffs.append(p.y0 * prod / denoms[m])
        prod = prod * (a + b * qpow)
        qpow = qpow * qstep
    return PowerSeries(p.alpha, tuple(coeffs))


def ambartsumian_series(p: AmbartsumianParams, terms: int,
                        product_form: str = "fractional") -> PowerSeries:
    """Truncated closed-form Ambartsumian solution with *terms* coefficients.

    ``product_form`` selects the product indexing: "fractional" uses factors
    (q**-(1 + alpha*j) - 1) for j = 0..m-1, "integer" uses (q**-j - 1) for
    j = 1..m.  The two coincide when alpha == 1.
    """
    if terms < 1:
        raise DomainError(f"terms must be >= 1, got {terms}")
    if product_form not in ("fractional", "integer"):
        raise ValueError(f"unknown product_form {product_form!r}")
    exact = p.alpha == 1 and isinstance(p.q, Fraction) and isinstance(p.lam, Fraction)
    denoms = _denominators(p.alpha, terms, exact)
    if exact:
        qinv = Fraction(1) / p.q
        prod: Scalar = Fraction(1)
        # both forms walk the factors (qinv**1 - 1), (qinv**2 - 1), ... here
        qpow: Scalar = qinv
        coeffs = []
        for m in range(terms):
            coeffs.append(p.lam * prod / denoms[m])
            prod = prod * (qpow - 1)
            qpow = qpow * qinv
        return PowerSeries(p.alpha, tuple(coeffs))
    qf = float(p.q)
    af = float(p.alpha)
    lam = float(p.lam)
    prod = 1.0
    coeffs = []
    for m in range(terms):
        coeffs.append(lam * prod / denoms[m])
        if product_form == "fractional":
            exponent = -(1.0 + af * m)
        else:
            exponent = -float(m + 1)
        prod = prod * (qf ** exponent - 1.0)
    return PowerSeries(p.alpha, tuple(coeffs))


def pantograph_system_series(A: SquareMatrix, B: SquareMatrix, q, alpha,
                             lam: Sequence, terms: int,
                             paper_literal: bool = False) -> VectorSeries:
    """Commensurate linear pantograph system solution as a vector series.

    Coefficient k (of t**(k*alpha)) is P_k @ lam / Gamma(k*alpha + 1) with the
    ordered product P_k = (A + B q**((k-1)alpha)) ... (A + B q**(0)) - the
    newest factor multiplies on the left, and P_0 is the identity.  With
    ``paper_literal`` the factor exponents flip sign to q**(-(k-1)alpha)...,
    which diverges term-wise for 0 < q < 1; the default orientation is the
    one that reduces to the scalar solution at dimension 1.
    """
    A._check_dim(B)
    q = as_scalar(q)
    if not 0 < q < 1:
        raise DomainError(f"pantograph delay factor q must lie in (0, 1), got {q}")
    alpha = as_scalar(alpha)
    if not 0 < alpha <= 1:
        raise DomainError(f"alpha must lie in (0, 1], got {alpha}")
    if terms < 1:
        raise DomainError(f"terms must be >= 1, got {terms}")
    lam = tuple(as_scalar(x) for x in lam)
    if len(lam) != A.dim:
        raise DimError(f"initial vector length {len(lam)} does not match dimension {A.dim}")

    exact = alpha == 1 and isinstance(q, Fraction)
    if exact:
        qstep: Scalar = q
        qpow: Scalar = Fraction(1)
    else:
        qstep = float(q) ** float(alpha)
        qpow = 1.0
    if paper_literal:
        qstep = Fraction(1) / qstep if isinstance(qstep, Fraction) else 1.0 / qstep
    denoms = _denominators(alpha, terms, exact and all(isinstance(x, Fraction) for x in lam)
                           and all(isinstance(v, Fraction) for M in (A, B) for row in M.rows
                                   for v in row))
    prod = SquareMatrix.identity(A.dim)
    rows = []
    for k in range(terms):
        vec = prod.matvec(lam)
        rows.append(tuple(v / denoms[k] for v in vec))
        prod = (A + B.scaled(qpow)) @ prod
        qpow = qpow * qstep
    return VectorSeries(alpha, tuple(rows))


def ambartsumian_system_series(B: SquareMatrix, q, alpha, lam: Sequence,
                               terms: int) -> VectorSeries:
    """Commensurate Ambartsumian system solution as a vector series.

    Coefficient k is P_k @ lam / Gamma(k*alpha + 1) with the ordered product
    P_k = (-I + B q**(-(k-1)alpha)) ... (-I + B q**(0)), newest factor on the
    left and P_0 the identity.  Requires q > 1.
    """
    q = as_scalar(q)
    if q <= 1:
        raise DomainError(f"Ambartsumian delay parameter q must exceed 1, got {q}")
    alpha = as_scalar(alpha)
    if not 0 < alpha <= 1:
        raise DomainError(f"alpha must lie in (0, 1], got {alpha}")
    if terms < 1:
        raise DomainError(f"terms must be >= 1, got {terms}")
    lam = tuple(as_scalar(x) for x in lam)
    if len(lam) != B.dim:
        raise DimError(f"initial vector length {len(lam)} does not match dimension {B.dim}")

    exact = alpha == 1 and isinstance(q, Fraction)
    if exact:
        qstep: Scalar = Fraction(1) / q
        qpow: Scalar = Fraction(1)
    else:
        qstep = float(q) ** -float(alpha)
        qpow = 1.0
    denoms = _denominators(alpha, terms, exact and all(isinstance(x, Fraction) for x in lam)
                           and all(isinstance(v, Fraction) for row in B.rows for v in row))
    neg_identity = -SquareMatrix.identity(B.dim)
    prod = SquareMatrix.identity(B.dim)
    rows = []
    for k in range(terms):
        vec = prod.matvec(lam)
        rows.append(tuple(v / denoms[k] for v in vec))
        prod = (neg_identity + B.scaled(qpow)) @ prod
        qpow = qpow * qstep
    return VectorSeries(alpha, tuple(rows))


@dataclass(frozen=True)
class SandwichReport:
    """Per-order check a**m <= prod_{j<m}(a + b q**(alpha j)) <= (a+b)**m."""

    ok: bool
    first_violation: int | None
    rows: tuple[tuple[Scalar, Scalar, Scalar], ...]


def sandwich_check(p: PantographParams, terms: int) -> SandwichReport:
    """Verify the coefficient-wise exponential sandwich for a, b >= 0.

    For non-negative a, b the pantograph solution is squeezed between the
    order-alpha exponentials of rates a and a+b; coefficient-wise that is
    a**m <= prod_{j<m}(a + b q**(alpha j)) <= (a+b)**m for every m.
    """
    if p.a < 0 or p.b < 0:
        raise DomainError("sandwich bounds need a >= 0 and b >= 0")
    if terms < 1:
        raise DomainError(f"terms must be >= 1, got {terms}")
    exact = p.alpha == 1 and all(isinstance(v, Fraction) for v in (p.a, p.b, p.q))
    if exact:
        a, b = p.a, p.b
        qstep: Scalar = p.q
        prod: Scalar = Fraction(1)
        low: Scalar = Fraction(1)
        high: Scalar = Fraction(1)
        qpow: Scalar = Fraction(1)
    else:
        a, b = float(p.a), float(p.b)
        qstep = float(p.q) ** float(p.alpha)
        prod = low = high = 1.0
        qpow = 1.0
    rows = []
    first = None
    for m in range(terms):
        rows.append((low, prod, high))
        if first is None and not (low <= prod <= high):
            first = m
        prod = prod * (a + b * qpow)
        qpow = qpow * qstep
        low = low * a
        high = high * (a + b)
    return SandwichReport(ok=first is None, first_violation=first, rows=tuple(rows))


# -- system-file parsing ------------------------------------------------------


def _matrix_from_json(raw, field: str) -> SquareMatrix:
    if not isinstance(raw, list) or not raw or not all(isinstance(r, list) for r in raw):
        raise FormatError(f"{field}: expected an array of arrays")
    rows = tuple(
        tuple(scalar_from_json(v, f"{field}[{i}][{j}]") for j, v in enumerate(row))
        for i, row in enumerate(raw)
    )
    try:
        return SquareMatrix(rows)
    except DimError as exc:
        raise FormatError(f"{field}: {exc}") from None


def system_from_json(doc) -> dict:
    """Parse the matrix-system JSON: {"A": [[..]], "B": [[..]], "lambda": [..],
    "q": ..., "alpha": ...}.  "A" may be omitted (Ambartsumian systems)."""
    if not isinstance(doc, dict):
        raise FormatError("system: expected a JSON object")
    for field in ("B", "lambda", "q", "alpha"):
        if field not in doc:
            raise FormatError(f"{field}: missing")
    out = {
        "B": _matrix_from_json(doc["B"], "B"),
        "q": scalar_from_json(doc["q"], "q"),
        "alpha": scalar_from_json(doc["alpha"], "alpha"),
    }
    if "A" in doc:
        out["A"] = _matrix_from_json(doc["A"], "A")
    raw_lam = doc["lambda"]
    if not isinstance(raw_lam, list) or not raw_lam:
        raise FormatError("lambda: expected a non-empty array")
    out["lambda"] = tuple(
        scalar_from_json(v, f"lambda[{i}]") for i, v in enumerate(raw_lam)
    )
    return out
