"""Arithmetic on truncated generalized power series sum_m c_m * t**(m*alpha).

A series keeps its coefficients on a single exponent grid {m*alpha} with
0 < alpha <= 1.  Two representations are used:

* exact mode: alpha == 1 and every coefficient is a ``fractions.Fraction``;
  all operations then stay in rational arithmetic, bit for bit.
* float mode: anything else (a fractional order, or any float input);
  coefficients are plain 64-bit floats.

The mode is decided once, at construction: a series with a single float
coefficient (or with alpha < 1) is coerced entirely to floats.  This keeps
the contagion rule predictable - rational in, rational out, but only on the
integer grid.

Truncation policy: binary operations return ``min`` of the operand
truncation orders, and integration raises the order by one.  Coefficients
beyond the known-valid order are never fabricated.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import AlphaMismatch, DomainError, FormatError
from . import specfun

Scalar = Union[Fraction, float]


def as_scalar(value) -> Scalar:
    """Coerce *value* to a Scalar.

    Integers and strings (including "p/q" forms) become exact Fractions;
    floats stay floats.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return value
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise FormatError(f"cannot parse {value!r} as a rational") from exc
    raise TypeError(f"cannot interpret {value!r} as a scalar")


def is_exact(value: Scalar) -> bool:
    return isinstance(value, Fraction)


def scalar_to_json(value: Scalar):
    """JSON form of a scalar: rationals as "p/q" strings, floats as numbers."""
    if isinstance(value, Fraction):
        return str(value)
    return float(value)


def scalar_from_json(value, field: str) -> Scalar:
    """Inverse of :func:`scalar_to_json`; *field* names the JSON location."""
    if isinstance(value, bool) or not isinstance(value, (int, float, str)):
        raise FormatError(f"{field}: expected a number or 'p/q' string, got {value!r}")
    try:
        return as_scalar(value)
    except FormatError:
        raise FormatError(f"{field}: cannot parse {value!r} as a rational") from None


def _validate_alpha(alpha) -> Scalar:
    alpha = as_scalar(alpha)
    if not 0 < alpha <= 1:
        raise DomainError(f"order exponent must lie in (0, 1], got {alpha}")
    return alpha


@dataclass(frozen=True)
class PowerSeries:
    """Truncated series sum_{m=0}^{trunc} coeffs[m] * t**(m*alpha).

    Immutable; every operation returns a new series.
    """

    alpha: Scalar
    coeffs: tuple[Scalar, ...]

    def __post_init__(self):
        alpha = _validate_alpha(self.alpha)
        coeffs = tuple(as_scalar(c) for c in self.coeffs)
        if not coeffs:
            raise ValueError("a series needs at least its constant coefficient")
        if not (alpha == 1 and all(isinstance(c, Fraction) for c in coeffs)):
            coeffs = tuple(float(c) for c in coeffs)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "coeffs", coeffs)

    # -- constructors ------------------------------------------------------

    @classmethod
    def constant(cls, value, alpha=1, trunc: int = 0) -> "PowerSeries":
        zero = Fraction(0)
        return cls(alpha, (as_scalar(value),) + (zero,) * trunc)

    @classmethod
    def zero(cls, alpha=1, trunc: int = 0) -> "PowerSeries":
        return cls.constant(0, alpha, trunc)

    @classmethod
    def monomial(cls, index: int, alpha=1, coeff=1, trunc: int | None = None) -> "PowerSeries":
        """coeff * t**(index*alpha), truncated at *trunc* (default: index)."""
        if index < 0:
            raise ValueError("monomial index must be >= 0")
        if trunc is None:
            trunc = index
        if trunc < index:
            raise ValueError("truncation order below monomial index")
        zero = Fraction(0)
        coeffs = [zero] * (trunc + 1)
        coeffs[index] = as_scalar(coeff)
        return cls(alpha, tuple(coeffs))

    # -- basic properties --------------------------------------------------

    @property
    def trunc(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_exact(self) -> bool:
        return self.alpha == 1 and all(isinstance(c, Fraction) for c in self.coeffs)

    def _check_grid(self, other: "PowerSeries") -> None:
        if self.alpha != other.alpha:
            raise AlphaMismatch(
                f"series live on different grids: alpha={self.alpha} vs {other.alpha}"
            )

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: "PowerSeries") -> "PowerSeries":
        if not isinstance(other, PowerSeries):
            return NotImplemented
        self._check_grid(other)
        n = min(self.trunc, other.trunc)
        return PowerSeries(
            self.alpha, tuple(self.coeffs[m] + other.coeffs[m] for m in range(n + 1))
        )

    def __neg__(self) -> "PowerSeries":
        return PowerSeries(self.alpha, tuple(-c for c in self.coeffs))

    def __sub__(self, other: "PowerSeries") -> "PowerSeries":
        if not isinstance(other, PowerSeries):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other) -> "PowerSeries":
        if isinstance(other, PowerSeries):
            self._check_grid(other)
            n = min(self.trunc, other.trunc)
            out = [Fraction(0)] * (n + 1)
            for i in range(min(self.trunc, n) + 1):
                ci = self.coeffs[i]
                if ci == 0:
                    continue
                for j in range(min(other.trunc, n - i) + 1):
                    out[i + j] += ci * other.coeffs[j]
            return PowerSeries(self.alpha, tuple(out))
        scalar = as_scalar(other)
        return PowerSeries(self.alpha, tuple(c * scalar for c in self.coeffs))

    __rmul__ = __mul__

    # -- spec operations ---------------------------------------------------

    def scale_argument(self, q) -> "PowerSeries":
        """Series of t |-> self(q*t): coefficient m picks up the factor q**(m*alpha).

        Exact when the series is exact and q is rational.
        """
        q = as_scalar(q)
        if q <= 0:
            raise DomainError(f"argument scale must be positive, got {q}")
        if self.is_exact and isinstance(q, Fraction):
            step: Scalar = q
        else:
            step = float(q) ** float(self.alpha)
        out = []
        power: Scalar = Fraction(1)
        for c in self.coeffs:
            out.append(c * power)
            power = power * step
        return PowerSeries(self.alpha, tuple(out))

    def integrate(self) -> "PowerSeries":
        """Antiderivative vanishing at 0, for the integer grid only.

        c_m t**m -> c_m t**(m+1)/(m+1); the truncation order grows by one.
        """
        if self.alpha != 1:
            raise AlphaMismatch("integrate requires alpha == 1; use frac_integrate")
        out = [Fraction(0)]
        for m, c in enumerate(self.coeffs):
            out.append(c / (m + 1))
        return PowerSeries(self.alpha, tuple(out))

    def frac_integrate(self, alpha=None) -> "PowerSeries":
        """Fractional integral of order alpha applied on the series' own grid.

        On monomials the integral of order a sends t**b to
        Gamma(b+1)/Gamma(b+a+1) * t**(b+a); with b = m*alpha the result stays
        on the grid, shifted up by one index.  alpha == 1 reduces exactly to
        :meth:`integrate`.
        """
        if alpha is not None and as_scalar(alpha) != self.alpha:
            raise AlphaMismatch(
                f"integration order {alpha} does not match the series grid {self.alpha}"
            )
        if self.alpha == 1:
            return self.integrate()
        a = float(self.alpha)
        out = [0.0]
        for m, c in enumerate(self.coeffs):
            out.append(c * specfun.gamma_ratio(m * a + 1.0, (m + 1) * a + 1.0))
        return PowerSeries(self.alpha, tuple(out))

    def eval(self, t) -> Scalar:
        """Value sum_m c_m * t**(m*alpha), accumulated in increasing m.

        Exact (rational) when the series, alpha and t are all rational with
        alpha == 1; otherwise a float.  Negative t is rejected on fractional
        grids.
        """
        t = as_scalar(t)
        if self.alpha == 1:
            if self.is_exact and isinstance(t, Fraction):
                acc: Scalar = Fraction(0)
                power: Scalar = Fraction(1)
            else:
                t = float(t)
                acc = 0.0
                power = 1.0
            for c in self.coeffs:
                acc = acc + c * power
                power = power * t
            return acc
        t = float(t)
        if t < 0:
            raise DomainError("negative t is undefined on a fractional exponent grid")
        x = t ** float(self.alpha)
        acc = 0.0
        power = 1.0
        for c in self.coeffs:
            acc += c * power
            power *= x
        return acc

    __call__ = eval

    def truncated(self, trunc: int) -> "PowerSeries":
        """Drop coefficients above *trunc* (which must not exceed the current order)."""
        if trunc < 0:
            raise ValueError("truncation order must be >= 0")
        if trunc > self.trunc:
            raise ValueError("cannot extend a series; coefficients beyond trunc are unknown")
        return PowerSeries(self.alpha, self.coeffs[: trunc + 1])

    # -- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        return {
            "alpha": scalar_to_json(self.alpha),
            "coeffs": [scalar_to_json(c) for c in self.coeffs],
        }

    @classmethod
    def from_json(cls, doc) -> "PowerSeries":
        if not isinstance(doc, dict):
            raise FormatError("series: expected a JSON object")
        if "alpha" not in doc:
            raise FormatError("series.alpha: missing")
        if "coeffs" not in doc:
            raise FormatError("series.coeffs: missing")
        alpha = scalar_from_json(doc["alpha"], "series.alpha")
        raw = doc["coeffs"]
        if not isinstance(raw, list) or not raw:
            raise FormatError("series.coeffs: expected a non-empty array")
        coeffs = tuple(
            scalar_from_json(v, f"series.coeffs[{i}]") for i, v in enumerate(raw)
        )
        try:
            return cls(alpha, coeffs)
        except DomainError as exc:
            raise FormatError(f"series.alpha: {exc}") from None


@dataclass(frozen=True)
class VectorSeries:
    """A vector-valued series: coeffs[m][i] multiplies t**(m*alpha) in component i."""

    alpha: Scalar
    coeffs: tuple[tuple[Scalar, ...], ...]

    def __post_init__(self):
        alpha = _validate_alpha(self.alpha)
        rows = tuple(tuple(as_scalar(c) for c in row) for row in self.coeffs)
        if not rows:
            raise ValueError("a vector series needs at least its constant coefficient")
        dim = len(rows[0])
        if dim < 1:
            raise ValueError("vector dimension must be >= 1")
        if any(len(row) != dim for row in rows):
            raise ValueError("all coefficient vectors must share the same dimension")
        if not (alpha == 1 and all(isinstance(c, Fraction) for row in rows for c in row)):
            rows = tuple(tuple(float(c) for c in row) for row in rows)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "coeffs", rows)

    @property
    def dim(self) -> int:
        return len(self.coeffs[0])

    @property
    def trunc(self) -> int:
        return len(self.coeffs) - 1

    def component(self, i: int) -> PowerSeries:
        if not 0 <= i < self.dim:
            raise IndexError(f"component {i} out of range for dimension {self.dim}")
        return PowerSeries(self.alpha, tuple(row[i] for row in self.coeffs))

    def eval(self, t) -> tuple[Scalar, ...]:
        return tuple(self.component(i).eval(t) for i in range(self.dim))

    def to_json(self) -> dict:
        return {
            "alpha": scalar_to_json(self.alpha),
            "dim": self.dim,
            "coeffs": [[scalar_to_json(c) for c in row] for row in self.coeffs],
        }
