"""Holonomy by path lifting and the Dulac correspondence at a corner.

Around the corner ``n x dy + m y dx = 0`` leaves satisfy ``x^m y^n = const``
and the Dulac correspondence is ``x -> x^(m/n)``. A map of abelian shape
``h(x) = mu x htilde(x^m)`` is transported to
``h^D(y) = mu1 y htilde1(y^n)`` with ``htilde1 = htilde^(m/n)`` and
``mu1 = exp((m/n) Log mu + 2 pi i branch / n)``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.integrate import solve_ivp

from .bivariate import BivariateSeries, OneForm
from .errors import (
    AxisNotInvariant,
    BranchCutCrossed,
    FieldCannotRepresentRoot,
    LeftSection,
    NotAbelianShape,
    StiffnessFailure,
)
from .series import TruncatedSeries, nth_root

__all__ = [
    "HolonomySample",
    "DulacData",
    "numeric_holonomy",
    "fit_holonomy",
    "dulac_transport_formal",
    "dulac_adjunction_check",
    "principal_power",
]

RTOL = 1e-10
MAX_STEPS = 10 ** 6


@dataclass(frozen=True)
class HolonomySample:
    base_radius: float
    inputs: tuple
    images: tuple
    fitted_multiplier: complex


@dataclass(frozen=True)
class DulacData:
    m: int
    n: int
    branch: int = 0

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ValueError("m and n must be positive")
        if math.gcd(self.m, self.n) != 1:
            raise ValueError(f"m={self.m} and n={self.n} are not coprime")


class _Evaluator:
    """Fast numeric evaluation of a bivariate polynomial."""

    def __init__(self, f: BivariateSeries):
        terms = f.monomials()
        self.i = np.array([t[0] for t in terms], dtype=int)
        self.j = np.array([t[1] for t in terms], dtype=int)
        self.c = np.array([complex(t[2]) for t in terms], dtype=complex)

    def __call__(self, x: complex, y: complex) -> complex:
        if not len(self.c):
            return 0j
        return complex(np.sum(self.c * np.power(x, self.i) * np.power(y, self.j)))


def numeric_holonomy(w: OneForm, section_x: float, y0: complex, max_steps: int = MAX_STEPS,
                     section_radius: float = 1.0, rtol: float = RTOL) -> complex:
    """Lift the loop ``x = section_x * exp(i theta)`` through ``(section_x, y0)``.

    Integrates ``dy/dtheta = -(A/B)(x, y) * i x`` from 0 to ``2 pi`` with an
    adaptive eighth-order Runge-Kutta method and returns the endpoint.
    """
    if not w.A.restrict_y0().is_zero():
        raise AxisNotInvariant("holonomy is computed along the invariant axis y = 0")
    Aev, Bev = _Evaluator(w.A), _Evaluator(w.B)
    calls = [0]
    budget = 13 * max_steps

    def rhs(theta, state):
        calls[0] += 1
        if calls[0] > budget:
            raise StiffnessFailure(f"more than {max_steps} steps along the loop")
        y = state[0]
        x = section_x * cmath.exp(1j * theta)
        b = Bev(x, y)
        if b == 0:
            raise StiffnessFailure(f"B vanishes on the lifted path at theta={theta:.6g}")
        return [-(Aev(x, y) / b) * 1j * x]

    def leaves(theta, state):
        return section_radius - abs(state[0])

    leaves.terminal = True
    sol = solve_ivp(rhs, (0.0, 2 * math.pi), [complex(y0)], method="DOP853", rtol=rtol,
                    atol=1e-14 * max(abs(y0), 1e-300), events=leaves)
    if sol.status == 1:
        raise LeftSection(f"|y| exceeded {section_radius} along the loop")
    if sol.status != 0:
        raise StiffnessFailure(sol.message)
    return complex(sol.y[0, -1])


def fit_holonomy(w: OneForm, section_x: float, y0s: Sequence[complex], **kwargs) -> HolonomySample:
    """Holonomy images for several ``y0`` and the multiplier ``lim h(y)/y``.

    ``h(y)/y = c0 + c1 y + c2 y^2 + ...``; a least-squares polynomial fit
    (degree up to 3) removes the bias of small but finite ``y0``.
    """
    ys = [complex(v) for v in y0s]
    images = [numeric_holonomy(w, section_x, v, **kwargs) for v in ys]
    ratios = np.array([h / v for h, v in zip(images, ys)])
    degree = min(3, len(ys) - 1)
    M = np.vander(np.array(ys), degree + 1, increasing=True)
    coef, *_ = np.linalg.lstsq(M, ratios, rcond=None)
    mult = complex(coef[0])
    return HolonomySample(section_x, tuple(ys), tuple(images), mult)


def _abelian_parts(h: TruncatedSeries, m: int):
    F = h.field
    if h.order < 2 or not F.is_zero(h[0]) or F.is_zero(h[1]):
        raise NotAbelianShape("h must vanish at 0 with nonzero linear coefficient")
    for e in range(2, h.order):
        if (e - 1) % m and not F.is_zero(h[e]):
            raise NotAbelianShape(f"coefficient of x^{e} must vanish for the shape x*h(x^{m})")
    mu = h[1]
    count = (h.order - 2) // m + 1
    tilde = TruncatedSeries([h[1 + r * m] / mu for r in range(count)], count, F)
    return mu, tilde


def _transport_multiplier(mu, m: int, n: int, branch: int, field):
    target = cmath.exp((m / n) * cmath.log(complex(mu)) + 2j * math.pi * branch / n)
    if not field.exact:
        return target
    best = None
    power = mu ** m
    for k in range(n):
        try:
            cand = field.root(power, n, k)
        except FieldCannotRepresentRoot:
            continue
        if best is None or abs(complex(cand) - target) < abs(complex(best) - target):
            best = cand
    if best is None or abs(complex(best) - target) > 1e-9 * max(1.0, abs(target)):
        raise FieldCannotRepresentRoot(f"mu^(m/n) on branch {branch} is not a Gaussian rational")
    return best


def dulac_transport_formal(h: TruncatedSeries, m: int, n: int, branch: int = 0) -> TruncatedSeries:
    """``h^D`` for ``h`` of abelian shape, truncated at ``n * len(htilde) + 1``."""
    DulacData(m, n, branch)
    F = h.field
    mu, tilde = _abelian_parts(h, m)
    tilde1 = nth_root(tilde ** m, n)
    mu1 = _transport_multiplier(mu, m, n, branch, F)
    order = n * tilde.order + 1
    cs = [F.zero] * order
    for r, c in enumerate(tilde1.coeffs):
        cs[1 + r * n] = mu1 * c
    return TruncatedSeries._raw(cs, order, F)


def principal_power(x: complex, m: int, n: int) -> complex:
    """Principal branch of ``x^(m/n)``."""
    if x == 0:
        return 0j
    return cmath.exp((m / n) * cmath.log(x))


def dulac_adjunction_check(h: TruncatedSeries, m: int, n: int, samples: Sequence[complex],
                           branch: int = 0) -> float:
    """``sup |h^D(D(x)) - D_branch(h(x))|`` over the samples.

    ``D`` is the principal ``x^(m/n)`` and ``D_branch`` multiplies it by
    ``exp(2 pi i branch / n)``. A sample whose image under ``h`` winds across
    the negative real axis relative to ``mu x`` would mix branches and raises
    :class:`BranchCutCrossed`.
    """
    hD = dulac_transport_formal(h, m, n, branch)
    mu, tilde = _abelian_parts(h, m)
    rot = cmath.exp(2j * math.pi * branch / n)
    worst = 0.0
    for x in samples:
        x = complex(x)
        hx = h(x)
        ht = tilde(x ** m)
        if abs(ht - 1) >= 1:
            raise BranchCutCrossed(f"sample {x!r} is outside the region where htilde stays near 1")
        wrap = (cmath.phase(hx) - cmath.phase(complex(mu)) - cmath.phase(x) - cmath.phase(ht)) / (2 * math.pi)
        if round(wrap) != 0:
            raise BranchCutCrossed(f"h moves the sample {x!r} across the branch cut of x^({m}/{n})")
        lhs = hD(principal_power(x, m, n))
        rhs = rot * principal_power(hx, m, n)
        worst = max(worst, abs(lhs - rhs))
    return worst
