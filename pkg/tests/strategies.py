"""Hypothesis strategies and seeded generators shared by the tests."""

from __future__ import annotations

import random
from fractions import Fraction

from hypothesis import strategies as st

from foliate.fields import EXACT, GaussianRational
from foliate.series import TruncatedSeries

small_int = st.integers(min_value=-9, max_value=9)
small_den = st.integers(min_value=1, max_value=7)


@st.composite
def gaussian_rationals(draw, allow_imag=True):
    re = Fraction(draw(small_int), draw(small_den))
    im = Fraction(draw(small_int), draw(small_den)) if allow_imag else 0
    return GaussianRational(re, im)


@st.composite
def exact_series(draw, order=8, constant=None, valuation=0):
    """Exact series mod z^order; ``constant`` pins a_0, ``valuation`` zeroes low terms."""
    cs = [draw(gaussian_rationals()) for _ in range(order)]
    for j in range(min(valuation, order)):
        cs[j] = GaussianRational(0)
    if constant is not None and valuation == 0:
        cs[0] = GaussianRational(constant)
    return TruncatedSeries(cs, order, EXACT)


@st.composite
def tangent_germs(draw, order=8):
    """``z + a_2 z^2 + ...`` up to a nonzero linear coefficient."""
    f = draw(exact_series(order=order, valuation=1))
    lead = draw(gaussian_rationals().filter(lambda c: c != 0))
    cs = list(f.coeffs)
    cs[1] = lead
    return TruncatedSeries(cs, order, EXACT)


def random_gaussian(rng: random.Random, den: int = 9, span: int = 9) -> GaussianRational:

    return GaussianRational(Fraction(rng.randint(-span, span), rng.randint(1, den)),
                            Fraction(rng.randint(-span, span), rng.randint(1, den)))


def random_series(rng: random.Random, order: int = 16, constant=None, valuation: int = 0,
                  density: float = 1.0) -> TruncatedSeries:
    cs = []
    for j in range(order):
        if j < valuation:
            cs.append(GaussianRational(0))
        elif j == valuation and constant is not None:
            cs.append(constant if isinstance(constant, GaussianRational) else GaussianRational(constant))
        elif j == valuation:
            c = random_gaussian(rng)
            while c == 0:
                c = random_gaussian(rng)
            cs.append(c)
        else:
            cs.append(random_gaussian(rng) if rng.random() < density else GaussianRational(0))
    return TruncatedSeries(cs, order, EXACT)


def form(a_terms, b_terms, order: int = 16, field=EXACT):
    """``A dx + B dy`` from ``{(i, j): c}`` dictionaries."""
    from foliate.bivariate import BivariateSeries, OneForm
    return OneForm(BivariateSeries(a_terms, order, field), BivariateSeries(b_terms, order, field))


def pullback(w, X, Y):
    """``omega`` pulled back by ``(x, y) = (X(x, y), Y(x, y))`` with ``X, Y`` bivariate series."""
    from foliate.bivariate import BivariateSeries, OneForm

    def subst(f):
        acc = BivariateSeries({}, f.order, f.field)
        for (i, j), c in f.coeffs.items():
            acc = acc + (X ** i) * (Y ** j) * c
        return acc

    A, B = subst(w.A), subst(w.B)
    return OneForm(A * X.dx() + B * Y.dx(), A * X.dy() + B * Y.dy())


@st.composite
def bivariate_units(draw, order=6, max_degree=3):
    from foliate.bivariate import BivariateSeries
    c0 = draw(gaussian_rationals().filter(lambda c: c != 0))
    terms = {(0, 0): c0}
    for d in range(1, max_degree + 1):
        for i in range(d + 1):
            terms[(i, d - i)] = draw(gaussian_rationals())
    return BivariateSeries(terms, order, EXACT)


@st.composite
def higher_terms(draw, min_degree=2, max_degree=4):
    out = {}
    for d in range(min_degree, max_degree + 1):
        for i in range(d + 1):
            if draw(st.booleans()):
                out[(i, d - i)] = draw(gaussian_rationals())
    return out
