"""Bivariate truncated series and holomorphic 1-forms.

A :class:`BivariateSeries` stores the monomials ``c * x^i * y^j`` whose
weighted degree ``wx*i + wy*j`` is below the truncation order ``N``. The
default weights ``(1, 1)`` give the usual total-degree truncation of a germ.
Blow-up charts use ``(1, 0)`` or ``(0, 1)``: after ``y = t x`` the
coefficients are polynomials in ``t`` and only the power of ``x`` is
truncated, which is what a later translation ``t -> t* + u`` needs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import comb
from typing import Iterable, Mapping

from .errors import TruncationTooShort, ZeroForm
from .fields import EXACT
from .series import TruncatedSeries, _weaker, multiply

__all__ = ["BivariateSeries", "OneForm", "GERM", "XT_WEIGHTS", "SY_WEIGHTS"]

GERM = (1, 1)
XT_WEIGHTS = (1, 0)
SY_WEIGHTS = (0, 1)


class BivariateSeries:
    __slots__ = ("coeffs", "order", "field", "weights")

    def __init__(self, coeffs: Mapping | Iterable = (), order: int = 16, field=EXACT,
                 weights: tuple[int, int] = GERM):
        if order < 1:
            raise ValueError("truncation order must be a positive integer")
        items = coeffs.items() if isinstance(coeffs, Mapping) else (((i, j), c) for i, j, c in coeffs)
        wx, wy = weights
        data: dict = {}
        for (i, j), c in items:
            if i < 0 or j < 0:
                raise ValueError(f"negative exponent ({i}, {j})")
            if wx * i + wy * j >= order:
                continue
            c = field.coerce(c)
            key = (i, j)
            data[key] = data[key] + c if key in data else c
        self.coeffs = {k: v for k, v in data.items() if v != 0}
        self.order = order
        self.field = field
        self.weights = tuple(weights)

    @classmethod
    def _raw(cls, coeffs: dict, order, field, weights):
        obj = object.__new__(cls)
        obj.coeffs = coeffs
        obj.order = order
        obj.field = field
        obj.weights = weights
        return obj

    @classmethod
    def x(cls, order=16, field=EXACT):
        return cls({(1, 0): 1}, order, field)

    @classmethod
    def y(cls, order=16, field=EXACT):
        return cls({(0, 1): 1}, order, field)

    @classmethod
    def constant(cls, c, order=16, field=EXACT, weights=GERM):
        return cls({(0, 0): c}, order, field, weights)

    # -- protocol -------------------------------------------------------

    def __getitem__(self, key):
        return self.coeffs.get(key, self.field.zero)

    def known(self, i: int, j: int) -> bool:
        return self.weights[0] * i + self.weights[1] * j < self.order

    def monomials(self):
        """Sorted ``(i, j, c)`` triples of the stored nonzero coefficients."""
        return [(i, j, self.coeffs[(i, j)]) for i, j in sorted(self.coeffs)]

    def is_zero(self) -> bool:
        return all(self.field.is_zero(c) for c in self.coeffs.values())

    def __eq__(self, other):
        if not isinstance(other, BivariateSeries):
            return NotImplemented
        if self.order != other.order or self.weights != other.weights:
            return False
        f = _weaker(self.field, other.field)
        keys = set(self.coeffs) | set(other.coeffs)
        return all(f.eq(self[k], other[k]) for k in keys)

    __hash__ = None

    def __repr__(self):
        terms = [f"({c})*x^{i}*y^{j}" for i, j, c in self.monomials()]
        return f"<{' + '.join(terms) or '0'} ; N={self.order} w={self.weights}>"

    def to_field(self, field) -> "BivariateSeries":
        if field == self.field:
            return self
        return BivariateSeries._raw({k: field.coerce(v) for k, v in self.coeffs.items()},
                                    self.order, field, self.weights)

    def truncate(self, order: int) -> "BivariateSeries":
        if order > self.order:
            raise TruncationTooShort(f"known only below weighted degree {self.order}")
        wx, wy = self.weights
        return BivariateSeries._raw({k: v for k, v in self.coeffs.items()
                                     if wx * k[0] + wy * k[1] < order},
                                    order, self.field, self.weights)

    def __call__(self, x, y) -> complex:
        return sum(complex(c) * x ** i * y ** j for (i, j), c in self.coeffs.items())

    def valuation(self):
        """Lowest total degree of a nonzero monomial, ``math.inf`` if none."""
        degs = [i + j for (i, j), c in self.coeffs.items() if not self.field.is_zero(c)]
        return min(degs) if degs else math.inf

    def homogeneous_part(self, d: int) -> "BivariateSeries":
        return BivariateSeries._raw({k: v for k, v in self.coeffs.items() if k[0] + k[1] == d},
                                    self.order, self.field, self.weights)

    # -- ring operations ------------------------------------------------

    def _binary_setup(self, other):
        if not isinstance(other, BivariateSeries):
            other = BivariateSeries.constant(other, self.order, self.field, self.weights)
        if other.weights != self.weights:
            raise ValueError("cannot combine series truncated with different weights")
        return other, min(self.order, other.order), _weaker(self.field, other.field)

    def __add__(self, other):
        other, n, f = self._binary_setup(other)
        wx, wy = self.weights
        out = {}
        for src in (self.coeffs, other.coeffs):
            for k, v in src.items():
                if wx * k[0] + wy * k[1] < n:
                    v = f.coerce(v)
                    out[k] = out[k] + v if k in out else v
        return BivariateSeries._raw({k: v for k, v in out.items() if v != 0}, n, f, self.weights)

    __radd__ = __add__

    def __neg__(self):
        return BivariateSeries._raw({k: -v for k, v in self.coeffs.items()},
                                    self.order, self.field, self.weights)

    def __sub__(self, other):
        other, _, _ = self._binary_setup(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, BivariateSeries):
            c = self.field.coerce(other)
            if c == 0:
                return BivariateSeries._raw({}, self.order, self.field, self.weights)
            return BivariateSeries._raw({k: v * c for k, v in self.coeffs.items()},
                                        self.order, self.field, self.weights)
        other, n, f = self._binary_setup(other)
        wx, wy = self.weights
        out: dict = {}
        for (i1, j1), c1 in self.coeffs.items():
            c1 = f.coerce(c1)
            for (i2, j2), c2 in other.coeffs.items():
                i, j = i1 + i2, j1 + j2
                if wx * i + wy * j >= n:
                    continue
                p = c1 * f.coerce(c2)
                key = (i, j)
                out[key] = out[key] + p if key in out else p
        return BivariateSeries._raw({k: v for k, v in out.items() if v != 0}, n, f, self.weights)

    __rmul__ = __mul__

    def __truediv__(self, c):
        c = self.field.coerce(c)
        return BivariateSeries._raw({k: v / c for k, v in self.coeffs.items()},
                                    self.order, self.field, self.weights)

    def __pow__(self, n: int):
        result = BivariateSeries.constant(1, self.order, self.field, self.weights)
        for _ in range(n):
            result = result * self
        return result

    # -- calculus and substitutions -------------------------------------

    def dx(self) -> "BivariateSeries":
        """Partial derivative in the first variable (precision drops by ``wx``)."""
        n = self.order - self.weights[0]
        if n < 1:
            raise TruncationTooShort("derivative leaves nothing known")
        return BivariateSeries._raw({(i - 1, j): i * c for (i, j), c in self.coeffs.items() if i},
                                    n, self.field, self.weights)

    def dy(self) -> "BivariateSeries":
        n = self.order - self.weights[1]
        if n < 1:
            raise TruncationTooShort("derivative leaves nothing known")
        return BivariateSeries._raw({(i, j - 1): j * c for (i, j), c in self.coeffs.items() if j},
                                    n, self.field, self.weights)

    def swap(self) -> "BivariateSeries":
        """Exchange the roles of the two variables."""
        return BivariateSeries._raw({(j, i): c for (i, j), c in self.coeffs.items()},
                                    self.order, self.field, self.weights[::-1])

    def restrict_y0(self) -> TruncatedSeries:
        """``x -> F(x, 0)`` as a univariate series (germ weights only)."""
        self._require_germ()
        cs = [self.field.zero] * self.order
        for (i, j), c in self.coeffs.items():
            if j == 0:
                cs[i] = c
        return TruncatedSeries._raw(cs, self.order, self.field)

    def substitute_y(self, s: TruncatedSeries) -> TruncatedSeries:
        """``x -> F(x, s(x))`` for ``s(0) = 0``, truncated at ``min(N, s.order)``."""
        self._require_germ()
        f = _weaker(self.field, s.field)
        n = min(self.order, s.order)
        s = s.truncate(n).to_field(f)
        maxj = max((j for _, j in self.coeffs), default=0)
        powers = [TruncatedSeries.constant(1, n, f)]
        for _ in range(maxj):
            powers.append(multiply(powers[-1], s))
        acc = [f.zero] * n
        for (i, j), c in self.coeffs.items():
            if i >= n:
                continue
            pj = powers[j].coeffs
            c = f.coerce(c)
            for r in range(n - i):
                if pj[r]:
                    acc[i + r] = acc[i + r] + c * pj[r]
        return TruncatedSeries._raw(acc, n, f)

    def shift_x_by(self, s: TruncatedSeries) -> "BivariateSeries":
        """``F(x + s(y), y)`` for ``s(0) = 0``; straightens the curve ``x = s(y)``."""
        self._require_germ()
        f = _weaker(self.field, s.field)
        n = min(self.order, s.order)
        sy = BivariateSeries({(0, j): c for j, c in enumerate(s.coeffs)}, n, f)
        base = BivariateSeries.x(n, f) + sy
        out = BivariateSeries({}, n, f)
        maxi = max((i for i, _ in self.coeffs), default=0)
        power = BivariateSeries.constant(1, n, f)
        by_i: dict = {}
        for (i, j), c in self.coeffs.items():
            by_i.setdefault(i, []).append((j, c))
        for i in range(maxi + 1):
            if i in by_i:
                row = BivariateSeries({(0, j): f.coerce(c) for j, c in by_i[i]}, n, f)
                out = out + row * power
            power = power * base
        return out

    def linear_substitute(self, m) -> "BivariateSeries":
        """``F(m00 X + m01 Y, m10 X + m11 Y)``; total degrees are preserved."""
        self._require_germ()
        f = self.field
        n = self.order
        lx = BivariateSeries({(1, 0): m[0][0], (0, 1): m[0][1]}, n, f)
        ly = BivariateSeries({(1, 0): m[1][0], (0, 1): m[1][1]}, n, f)
        maxi = max((i for i, _ in self.coeffs), default=0)
        maxj = max((j for _, j in self.coeffs), default=0)
        px = [BivariateSeries.constant(1, n, f)]
        for _ in range(maxi):
            px.append(px[-1] * lx)
        py = [BivariateSeries.constant(1, n, f)]
        for _ in range(maxj):
            py.append(py[-1] * ly)
        out = BivariateSeries({}, n, f)
        for (i, j), c in self.coeffs.items():
            out = out + (px[i] * py[j]) * c
        return out

    def _require_germ(self):
        if self.weights != GERM:
            raise ValueError("operation needs total-degree truncation")

    # -- blow-up plumbing -----------------------------------------------

    def pullback_xt(self) -> "BivariateSeries":
        """Substitute ``y = t x``: ``x^i y^j -> x^(i+j) t^j``; truncated in ``x`` only."""
        self._require_germ()
        return BivariateSeries._raw({(i + j, j): c for (i, j), c in self.coeffs.items()},
                                    self.order, self.field, XT_WEIGHTS)

    def pullback_sy(self) -> "BivariateSeries":
        """Substitute ``x = s y``: ``x^i y^j -> s^i y^(i+j)``; truncated in ``y`` only."""
        self._require_germ()
        return BivariateSeries._raw({(i, i + j): c for (i, j), c in self.coeffs.items()},
                                    self.order, self.field, SY_WEIGHTS)

    def divide_by_divisor(self, k: int) -> "BivariateSeries":
        """Divide a chart series by the ``k``-th power of its divisor coordinate."""
        f = self.field
        if self.weights == XT_WEIGHTS:
            axis = 0
        elif self.weights == SY_WEIGHTS:
            axis = 1
        else:
            raise ValueError("divide_by_divisor needs chart weights")
        out = {}
        for key, c in self.coeffs.items():
            if key[axis] < k:
                if not f.is_zero(c):
                    raise ValueError(f"chart series is not divisible by the divisor power {k}")
                continue
            new = (key[0] - k, key[1]) if axis == 0 else (key[0], key[1] - k)
            out[new] = c
        if self.order - k < 1:
            raise TruncationTooShort("blow-up consumed the whole truncation")
        return BivariateSeries._raw(out, self.order - k, f, self.weights)

    def divisor_coefficient(self, axis_power: int = 0):
        """Polynomial in the chart variable multiplying ``divisor^axis_power``."""
        axis = 0 if self.weights == XT_WEIGHTS else 1
        poly: dict = {}
        for (i, j), c in self.coeffs.items():
            d, other = (i, j) if axis == 0 else (j, i)
            if d == axis_power:
                poly[other] = c
        return poly

    def localize(self, center=0, field=None) -> "BivariateSeries":
        """Germ at a point of the divisor, in coordinates (divisor, chart - center).

        For an XT series (coordinates ``x, t``) the result is a germ in
        ``(x, u)`` with ``t = center + u``; for an SY series (``s, y``) the
        result is a germ in ``(s - center, y)``. Germ truncation equals the
        chart order because every retained monomial is exactly known.
        """
        f = field or self.field
        n = self.order
        center = f.coerce(center)
        if self.weights == XT_WEIGHTS:
            pairs = [((i, j), c) for (i, j), c in self.coeffs.items()]
        elif self.weights == SY_WEIGHTS:
            pairs = [((j, i), c) for (i, j), c in self.coeffs.items()]
        else:
            raise ValueError("localize needs chart weights")
        out: dict = {}
        zero_center = f.is_zero(center) if not f.exact else center == 0
        for (d, m), c in pairs:
            if d >= n:
                continue
            c = f.coerce(c)
            if zero_center:
                if d + m < n:
                    out[(d, m)] = out.get((d, m), f.zero) + c
                continue
            # (center + u)^m = sum_r binom(m, r) center^(m-r) u^r
            powers = [f.one]
            for _ in range(m):
                powers.append(powers[-1] * center)
            for r in range(0, min(m, n - 1 - d) + 1):
                term = c * comb(m, r) * powers[m - r]
                key = (d, r)
                out[key] = out.get(key, f.zero) + term
        if self.weights == SY_WEIGHTS:
            out = {(j, i): c for (i, j), c in out.items()}
        return BivariateSeries._raw({k: v for k, v in out.items() if v != 0}, n, f, GERM)


@dataclass(frozen=True, eq=False)
class OneForm:
    """``omega = A dx + B dy``; the dual vector field is ``B d/dx - A d/dy``."""

    A: BivariateSeries
    B: BivariateSeries

    def __post_init__(self):
        if self.A.weights != self.B.weights:
            raise ValueError("coefficients must share their truncation weights")

    @classmethod
    def from_monomials(cls, a_terms, b_terms, order: int = 16, field=EXACT) -> "OneForm":
        return cls(BivariateSeries(a_terms, order, field), BivariateSeries(b_terms, order, field))

    @property
    def order(self) -> int:
        return min(self.A.order, self.B.order)

    @property
    def field(self):
        return _weaker(self.A.field, self.B.field)

    def __eq__(self, other):
        return isinstance(other, OneForm) and self.A == other.A and self.B == other.B

    __hash__ = None

    def __repr__(self):
        return f"OneForm(A={self.A!r}, B={self.B!r})"

    def is_zero(self) -> bool:
        return self.A.is_zero() and self.B.is_zero()

    def to_field(self, field) -> "OneForm":
        return OneForm(self.A.to_field(field), self.B.to_field(field))

    def scaled(self, u) -> "OneForm":
        """``u * omega`` for a scalar or a bivariate unit ``u``; same foliation."""
        return OneForm(self.A * u, self.B * u)

    def swap(self) -> "OneForm":
        """The same form written in the exchanged coordinates ``(y, x)``."""
        return OneForm(self.B.swap(), self.A.swap())

    def linear_change(self, m) -> "OneForm":
        """Pullback by ``(x, y) = m (X, Y)``."""
        A = self.A.linear_substitute(m)
        B = self.B.linear_substitute(m)
        f = self.field
        m = [[f.coerce(v) for v in row] for row in m]
        return OneForm(A * m[0][0] + B * m[1][0], A * m[0][1] + B * m[1][1])

    def straighten_graph_over_y(self, s: TruncatedSeries) -> "OneForm":
        """Pullback by ``x = X + s(y)``; the curve ``x = s(y)`` becomes ``X = 0``.

        An error ``O(y^M)`` in ``s`` only reaches total degree ``M``, so the
        result is truncated at ``min(N, s.order)``.
        """
        n = min(self.order, s.order)
        A = self.A.truncate(n).shift_x_by(s)
        B = self.B.truncate(n).shift_x_by(s)
        ds = s.derivative()
        dsy = BivariateSeries({(0, j): c for j, c in enumerate(ds.coeffs)}, n, A.field)
        return OneForm(A, A * dsy + B)

    def __call__(self, x, y):
        return self.A(x, y), self.B(x, y)

    def lowest_order(self) -> int:
        v = min(self.A.valuation(), self.B.valuation())
        if v == math.inf:
            raise ZeroForm("1-form vanishes to the working truncation")
        return v
