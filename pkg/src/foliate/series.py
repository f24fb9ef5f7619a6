"""Univariate truncated formal power series.

A :class:`TruncatedSeries` stores the coefficients of ``z**0 .. z**(N-1)``
and represents every series that agrees with them modulo ``z**N``. Binary
operations return results truncated at the smaller of the two orders.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

from .errors import (
    CompositionNeedsPositiveValuation,
    ExpNeedsZeroConstantTerm,
    LogNeedsUnitConstantTerm,
    NotInvertible,
    RootNeedsUnitConstantTerm,
    TruncationTooShort,
    ZeroConstantTerm,
)
from .fields import EXACT, ApproxField, ExactField

__all__ = [
    "DEFAULT_ORDER",
    "TruncatedSeries",
    "series",
    "multiply",
    "invert",
    "compose",
    "compositional_inverse",
    "nth_root",
    "formal_log",
    "formal_exp",
    "derivative_and_valuation",
]

DEFAULT_ORDER = 16


class TruncatedSeries:
    """Immutable power series ``sum coeffs[j] z**j  mod z**order``."""

    __slots__ = ("coeffs", "order", "field")

    def __init__(self, coeffs: Iterable, order: int | None = None,
                 field: ExactField | ApproxField = EXACT):
        cs = [field.coerce(c) for c in coeffs]
        if order is None:
            order = len(cs)
        if order < 1:
            raise ValueError("truncation order must be a positive integer")
        if len(cs) < order:
            cs.extend([field.zero] * (order - len(cs)))
        object.__setattr__(self, "coeffs", tuple(cs[:order]))
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "field", field)

    @classmethod
    def _raw(cls, coeffs, order, field):
        obj = object.__new__(cls)
        object.__setattr__(obj, "coeffs", tuple(coeffs))
        object.__setattr__(obj, "order", order)
        object.__setattr__(obj, "field", field)
        return obj

    def __setattr__(self, key, value):
        raise AttributeError("TruncatedSeries is immutable")

    # -- constructors ---------------------------------------------------

    @classmethod
    def monomial(cls, k: int, order: int = DEFAULT_ORDER, field=EXACT, coeff=1):
        cs = [field.zero] * order
        if k < order:
            cs[k] = field.coerce(coeff)
        return cls._raw(cs, order, field)

    @classmethod
    def identity(cls, order: int = DEFAULT_ORDER, field=EXACT):
        return cls.monomial(1, order, field)

    @classmethod
    def constant(cls, c, order: int = DEFAULT_ORDER, field=EXACT):
        return cls.monomial(0, order, field, c)

    # -- basic protocol -------------------------------------------------

    def __len__(self):
        return self.order

    def __getitem__(self, j):
        return self.coeffs[j]

    def __iter__(self):
        return iter(self.coeffs)

    def __repr__(self):
        terms = []
        for j, c in enumerate(self.coeffs):
            if self.field.is_zero(c):
                continue
            terms.append(f"({c})*z^{j}" if j else f"({c})")
        body = " + ".join(terms) if terms else "0"
        return f"<{body} mod z^{self.order}>"

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        if self.order != other.order:
            return False
        f = _weaker(self.field, other.field)
        return all(f.eq(a, b) for a, b in zip(self.coeffs, other.coeffs))

    __hash__ = None

    def equal_mod(self, other: "TruncatedSeries", n: int) -> bool:
        """Coefficientwise equality of the first ``n`` coefficients."""
        if n > min(self.order, other.order):
            raise TruncationTooShort(f"cannot compare mod z^{n}")
        f = _weaker(self.field, other.field)
        return all(f.eq(self.coeffs[j], other.coeffs[j]) for j in range(n))

    @property
    def valuation(self):
        """Index of the first nonzero coefficient, ``math.inf`` if none."""
        for j, c in enumerate(self.coeffs):
            if not self.field.is_zero(c):
                return j
        return math.inf

    def is_zero(self) -> bool:
        return self.valuation == math.inf

    def truncate(self, n: int) -> "TruncatedSeries":
        if n > self.order:
            raise TruncationTooShort(f"series known only mod z^{self.order}, asked for {n}")
        return TruncatedSeries._raw(self.coeffs[:n], n, self.field)

    def padded(self, n: int) -> "TruncatedSeries":
        """Extend with zero coefficients up to order ``n`` (a representative choice)."""
        if n <= self.order:
            return self.truncate(n)
        return TruncatedSeries._raw(self.coeffs + (self.field.zero,) * (n - self.order), n, self.field)

    def to_field(self, field) -> "TruncatedSeries":
        if field == self.field:
            return self
        return TruncatedSeries._raw([field.coerce(c) for c in self.coeffs], self.order, field)

    def shift_down(self, k: int) -> "TruncatedSeries":
        """Divide by ``z**k``; the first ``k`` coefficients must vanish."""
        if any(not self.field.is_zero(c) for c in self.coeffs[:k]):
            raise ValueError(f"series is not divisible by z^{k}")
        if k >= self.order:
            raise TruncationTooShort("nothing left after division")
        return TruncatedSeries._raw(self.coeffs[k:], self.order - k, self.field)

    def shift_up(self, k: int) -> "TruncatedSeries":
        """Multiply by ``z**k``; the known precision grows by ``k``."""
        return TruncatedSeries._raw((self.field.zero,) * k + self.coeffs, self.order + k, self.field)

    def __call__(self, z):
        """Numerical value of the stored polynomial part at ``z``."""
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * z + complex(c)
        return acc

    # -- ring operations ------------------------------------------------

    def _coerce_operand(self, other):
        if isinstance(other, TruncatedSeries):
            return other
        return TruncatedSeries.constant(self.field.coerce(other), self.order, self.field)

    def __add__(self, other):
        o = self._coerce_operand(other)
        n = min(self.order, o.order)
        f = _weaker(self.field, o.field)
        return TruncatedSeries._raw(
            [f.coerce(a) + f.coerce(b) for a, b in zip(self.coeffs[:n], o.coeffs[:n])], n, f)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries._raw([-c for c in self.coeffs], self.order, self.field)

    def __sub__(self, other):
        return self + (-self._coerce_operand(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return multiply(self, other)
        c = self.field.coerce(other)
        return TruncatedSeries._raw([c * a for a in self.coeffs], self.order, self.field)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, TruncatedSeries):
            return multiply(self, invert(other))
        c = self.field.coerce(other)
        return TruncatedSeries._raw([a / c for a in self.coeffs], self.order, self.field)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = TruncatedSeries.constant(1, self.order, self.field)
        base = self
        while n:
            if n & 1:
                result = multiply(result, base)
            n >>= 1
            if n:
                base = multiply(base, base)
        return result

    def derivative(self) -> "TruncatedSeries":
        if self.order < 2:
            raise TruncationTooShort("derivative of a series known mod z^1 is unknown")
        return TruncatedSeries._raw(
            [j * self.coeffs[j] for j in range(1, self.order)], self.order - 1, self.field)


def _weaker(f1, f2):
    """Result field of a binary operation: approximate wins, larger tolerance wins."""
    if f1 == f2:
        return f1
    if f1.exact:
        return f2
    if f2.exact:
        return f1
    return f1 if f1.tol >= f2.tol else f2


def series(coeffs: Sequence, order: int = DEFAULT_ORDER, field=EXACT) -> TruncatedSeries:
    """Shorthand constructor: ``series([1, 1], 4)`` is ``1 + z mod z^4``."""
    if len(coeffs) > order:
        raise ValueError(f"{len(coeffs)} coefficients do not fit below z^{order}")
    return TruncatedSeries(coeffs, order, field)


def multiply(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product ``c_r = sum_j a_j b_(r-j)`` truncated at ``min`` order."""
    n = min(a.order, b.order)
    f = _weaker(a.field, b.field)
    ac = a.coeffs if a.field == f else [f.coerce(c) for c in a.coeffs]
    bc = b.coeffs if b.field == f else [f.coerce(c) for c in b.coeffs]
    out = [f.zero] * n
    for i in range(n):
        ai = ac[i]
        if not ai:
            continue
        for j in range(n - i):
            bj = bc[j]
            if bj:
                out[i + j] = out[i + j] + ai * bj
    return TruncatedSeries._raw(out, n, f)


def invert(a: TruncatedSeries) -> TruncatedSeries:
    """Multiplicative inverse; requires a nonzero constant term."""
    f = a.field
    a0 = a.coeffs[0]
    if f.is_zero(a0):
        raise ZeroConstantTerm("series with zero constant term is not a unit")
    n = a.order
    inv0 = f.one / a0
    out = [inv0]
    for r in range(1, n):
        acc = f.zero
        for j in range(1, r + 1):
            aj = a.coeffs[j]
            if aj:
                acc = acc + aj * out[r - j]
        out.append(-acc * inv0)
    return TruncatedSeries._raw(out, n, f)


def compose(outer: TruncatedSeries, inner: TruncatedSeries) -> TruncatedSeries:
    """Formal substitution ``outer(inner(z))``; ``inner`` must have zero constant term."""
    if not inner.field.is_zero(inner.coeffs[0]):
        raise CompositionNeedsPositiveValuation("inner series has a nonzero constant term")
    n = min(outer.order, inner.order)
    f = _weaker(outer.field, inner.field)
    inner = inner.truncate(n).to_field(f)
    # drop the (possibly tolerance-small) constant term so the result is exact in z^0
    inner = TruncatedSeries._raw((f.zero,) + inner.coeffs[1:], n, f)
    oc = [f.coerce(c) for c in outer.coeffs[:n]]
    result = TruncatedSeries.constant(oc[n - 1], n, f)
    for j in range(n - 2, -1, -1):
        result = multiply(result, inner)
        result = TruncatedSeries._raw((result.coeffs[0] + oc[j],) + result.coeffs[1:], n, f)
    return result


def compositional_inverse(f: TruncatedSeries) -> TruncatedSeries:
    """The unique ``g`` with ``f(g(z)) = g(f(z)) = z``, by Lagrange inversion.

    ``[z^n] g = (1/n) [w^(n-1)] (w / f(w))^n``.
    """
    F = f.field
    if f.order < 2 or not F.is_zero(f.coeffs[0]) or F.is_zero(f.coeffs[1]):
        raise NotInvertible("compositional inverse needs f(0) = 0 and f'(0) != 0")
    n = f.order
    h = invert(TruncatedSeries._raw(f.coeffs[1:], n - 1, F))
    out = [F.zero] * n
    power = h
    for k in range(1, n):
        out[k] = power.coeffs[k - 1] / k
        if k + 1 < n:
            power = multiply(power, h)
    return TruncatedSeries._raw(out, n, F)


def _is_one(field, c) -> bool:
    return field.is_zero(c - field.one)


def nth_root(f: TruncatedSeries, n: int) -> TruncatedSeries:
    """Unique ``g`` with ``g(0) = 1`` and ``g**n = f``, by Newton iteration."""
    if not isinstance(n, int) or n < 1:
        raise ValueError("root index must be a positive integer")
    F = f.field
    if not _is_one(F, f.coeffs[0]):
        raise RootNeedsUnitConstantTerm("n-th root needs constant term 1")
    if n == 1:
        return f
    N = f.order
    g = TruncatedSeries.constant(1, N, F)
    precision = 1
    while precision < N:
        # g <- g + (f / g^(n-1) - g) / n ; doubles the number of correct terms
        correction = multiply(f, invert(g) ** (n - 1)) - g
        g = g + correction / n
        precision *= 2
    return g


def formal_log(f: TruncatedSeries) -> TruncatedSeries:
    """``L(1 + mu) = sum_{j>=1} (-1)^(j+1) mu^j / j``."""
    F = f.field
    if not _is_one(F, f.coeffs[0]):
        raise LogNeedsUnitConstantTerm("formal logarithm needs constant term 1")
    N = f.order
    mu = TruncatedSeries._raw((F.zero,) + f.coeffs[1:], N, F)
    result = TruncatedSeries._raw([F.zero] * N, N, F)
    power = mu
    for j in range(1, N):
        term = power / j
        result = result + (term if j % 2 else -term)
        power = multiply(power, mu)
    return result


def formal_exp(f: TruncatedSeries) -> TruncatedSeries:
    """``E(psi) = sum_{n>=0} psi^n / n!``."""
    F = f.field
    if not F.is_zero(f.coeffs[0]):
        raise ExpNeedsZeroConstantTerm("formal exponential needs zero constant term")
    N = f.order
    psi = TruncatedSeries._raw((F.zero,) + f.coeffs[1:], N, F)
    result = TruncatedSeries.constant(1, N, F)
    term = TruncatedSeries.constant(1, N, F)
    for k in range(1, N):
        term = multiply(term, psi) / k
        result = result + term
    return result


def derivative_and_valuation(f: TruncatedSeries):
    """Termwise derivative (order ``N-1``) together with ``f.valuation``."""
    return f.derivative(), f.valuation
