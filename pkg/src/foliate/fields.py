"""Coefficient fields.

Two instantiations are provided:

* :class:`ExactField` over :class:`GaussianRational` numbers (exact, backed by
  ``gmpy2.mpq``),
* :class:`ApproxField` over Python ``complex`` with an explicit tolerance.

Series and forms carry their field; all zero tests go through
``field.is_zero`` so the approximate tolerance is never an implicit global.
Both fields have characteristic zero, which the log/exp/root operations need.
"""

from __future__ import annotations

import cmath
import math
import re
from fractions import Fraction
from numbers import Number

import gmpy2
from gmpy2 import mpq

from .errors import FieldCannotRepresentRoot

__all__ = [
    "GaussianRational",
    "ExactField",
    "ApproxField",
    "EXACT",
    "APPROX",
    "parse_rational",
]


def _q(v) -> mpq:
    if isinstance(v, type(mpq())):
        return v
    if isinstance(v, (int, Fraction)):
        return mpq(v)
    if isinstance(v, str):
        return parse_rational(v)
    if type(v).__name__ == "mpz":
        return mpq(v)
    raise TypeError(f"cannot make an exact rational from {v!r}")


_RATIONAL = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def parse_rational(text: str) -> mpq:
    """Parse ``"p"`` or ``"p/q"``. Raises ``ValueError`` on anything else."""
    m = _RATIONAL.match(text)
    if not m:
        raise ValueError(f"malformed rational {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return mpq(num, den)


class GaussianRational:
    """Exact complex number ``re + im*i`` with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _q(re)
        self.im = _q(im)

    @classmethod
    def _make(cls, re, im):
        obj = object.__new__(cls)
        obj.re = re
        obj.im = im
        return obj

    @staticmethod
    def _coerce(other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Fraction)) or type(other).__name__ in ("mpq", "mpz"):
            return GaussianRational._make(mpq(other), mpq(0))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational._make(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational._make(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational._make(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not self.im and not o.im:
            return GaussianRational._make(self.re * o.re, mpq(0))
        return GaussianRational._make(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o.im:
            if not o.re:
                raise ZeroDivisionError("division by exact zero")
            return GaussianRational._make(self.re / o.re, self.im / o.re)
        d = o.re * o.re + o.im * o.im
        return GaussianRational._make(
            (self.re * o.re + self.im * o.im) / d, (self.im * o.re - self.re * o.im) / d
        )

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __neg__(self):
        return GaussianRational._make(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return (GaussianRational(1) / self) ** (-n)
        result = GaussianRational(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, complex):
                return complex(self) == other
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if not self.im:
            return hash(Fraction(int(self.re.numerator), int(self.re.denominator)))
        return hash((int(self.re.numerator), int(self.re.denominator),
                     int(self.im.numerator), int(self.im.denominator)))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __abs__(self):
        return abs(complex(self))

    def conjugate(self):
        return GaussianRational._make(self.re, -self.im)

    def abs2(self) -> mpq:
        return self.re * self.re + self.im * self.im

    @property
    def is_real(self) -> bool:
        return not self.im

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im} i"
        sign = "-" if self.im < 0 else "+"
        return f"{self.re} {sign} {abs(self.im)} i"

    def __repr__(self):
        return f"GaussianRational({self})"

    @classmethod
    def parse(cls, text: str) -> "GaussianRational":
        """Inverse of ``str``: ``"p/q"``, ``"p/q i"``, ``"a/b + c/d i"``."""
        t = text.strip()
        if not t.endswith("i"):
            return cls(parse_rational(t))
        body = t[:-1].strip()
        m = re.match(r"^(.*\S)\s+([+-])\s+(\S+)$", body)
        if m:
            real = parse_rational(m.group(1))
            imag = parse_rational(m.group(3))
            return cls(real, imag if m.group(2) == "+" else -imag)
        return cls(0, parse_rational(body))


def _digits(q: mpq) -> int:
    return len(str(abs(q.numerator))) + len(str(q.denominator))


class ExactField:
    """Gaussian rationals. Equality is exact; tolerance is zero."""

    name = "exact"
    tol = 0
    exact = True

    def __repr__(self):
        return "ExactField()"

    def __eq__(self, other):
        return isinstance(other, ExactField)

    def __hash__(self):
        return hash("exact")

    @property
    def zero(self):
        return GaussianRational(0)

    @property
    def one(self):
        return GaussianRational(1)

    def coerce(self, v) -> GaussianRational:
        if isinstance(v, GaussianRational):
            return v
        if isinstance(v, complex) or isinstance(v, float):
            raise TypeError(f"refusing to coerce float {v!r} into the exact field")
        if isinstance(v, str):
            return GaussianRational.parse(v)
        return GaussianRational(v)

    def is_zero(self, c) -> bool:
        return not c

    def eq(self, a, b) -> bool:
        return a == b

    def to_complex(self, c) -> complex:
        return complex(c)

    def root(self, c, n: int, branch: int | None = None) -> GaussianRational:
        """Exact ``n``-th root of ``c``.

        With ``branch=None`` the principal root is preferred and the other
        roots are tried in counter-clockwise order; the first one lying in
        the field is returned. With an explicit ``branch`` only
        ``principal * exp(2*pi*i*branch/n)`` is tried.
        Raises :class:`FieldCannotRepresentRoot` when no candidate is exact.
        """
        c = self.coerce(c)
        if n == 1:
            return c
        if not c:
            return GaussianRational(0)
        if c.is_real and c.re > 0 and branch in (None, 0):
            num, ok1 = gmpy2.iroot(c.re.numerator, n)
            den, ok2 = gmpy2.iroot(c.re.denominator, n)
            if ok1 and ok2:
                return GaussianRational(mpq(num, den))
        import mpmath

        digits = max(_digits(c.re), _digits(c.im))
        with mpmath.workdps(40 + 2 * digits):
            z = mpmath.mpc(mpmath.mpf(int(c.re.numerator)) / int(c.re.denominator),
                           mpmath.mpf(int(c.im.numerator)) / int(c.im.denominator))
            principal = mpmath.root(z, n)
            ks = range(n) if branch is None else [branch % n]
            bound = 10 ** (digits + 6)
            for k in ks:
                cand = principal * mpmath.expjpi(mpmath.mpf(2 * k) / n)
                re_part = Fraction(mpmath.nstr(cand.real, 35 + 2 * digits, strip_zeros=False)
                                   ).limit_denominator(bound)
                im_part = Fraction(mpmath.nstr(cand.imag, 35 + 2 * digits, strip_zeros=False)
                                   ).limit_denominator(bound)
                b = GaussianRational(re_part, im_part)
                if b ** n == c:
                    return b
        raise FieldCannotRepresentRoot(f"no exact {n}-th root of {c} in Q(i)")

    def root_of_unity(self, n: int) -> GaussianRational:
        """``exp(2*pi*i/n)``; exact only for n in {1, 2, 4}."""
        table = {1: GaussianRational(1), 2: GaussianRational(-1), 4: GaussianRational(0, 1)}
        if n not in table:
            raise FieldCannotRepresentRoot(f"exp(2*pi*i/{n}) is not a Gaussian rational")
        return table[n]

    def format(self, c) -> str:
        return str(c)


class ApproxField:
    """Double-precision complex numbers compared with tolerance ``tol``."""

    name = "approx"
    exact = False

    def __init__(self, tol: float = 1e-12):
        if tol <= 0:
            raise ValueError("tolerance must be positive")
        self.tol = tol

    def __repr__(self):
        return f"ApproxField(tol={self.tol!r})"

    def __eq__(self, other):
        return isinstance(other, ApproxField) and other.tol == self.tol

    def __hash__(self):
        return hash(("approx", self.tol))

    @property
    def zero(self):
        return 0j

    @property
    def one(self):
        return 1 + 0j

    def coerce(self, v) -> complex:
        if isinstance(v, complex):
            return v
        if isinstance(v, str):
            return complex(GaussianRational.parse(v))
        if isinstance(v, Number) or isinstance(v, GaussianRational) or hasattr(v, "__complex__"):
            return complex(v)
        return complex(float(v))

    def is_zero(self, c) -> bool:
        return abs(c) <= self.tol

    def eq(self, a, b) -> bool:
        return abs(complex(a) - complex(b)) <= self.tol

    def to_complex(self, c) -> complex:
        return complex(c)

    def root(self, c, n: int, branch: int | None = None) -> complex:
        c = complex(c)
        if c == 0:
            return 0j
        principal = cmath.exp(cmath.log(c) / n)
        return principal * cmath.exp(2j * math.pi * ((branch or 0) % n) / n)

    def root_of_unity(self, n: int) -> complex:
        exact = {1: 1 + 0j, 2: -1 + 0j, 4: 1j}
        if n in exact:
            return exact[n]
        return cmath.exp(2j * math.pi / n)

    def format(self, c):
        c = complex(c)
        return [c.real, c.imag]


EXACT = ExactField()
APPROX = ApproxField()
