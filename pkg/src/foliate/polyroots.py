"""Roots of univariate polynomials with exact or approximate coefficients.

Numerical roots come from the Aberth-Ehrlich simultaneous iteration. In
the exact field the polynomial is first made squarefree with an exact gcd;
numerical roots are then snapped to nearby Gaussian rationals and kept
exact when the snapped value is an exact root.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from .errors import RootIsolationFailed
from .fields import GaussianRational

__all__ = ["Root", "poly_roots", "aberth", "poly_eval", "poly_divmod", "poly_gcd"]

RESIDUAL_TOL = 1e-12
CLUSTER_RADIUS = 1e-5
SNAP_BOUND = 10 ** 6


@dataclass(frozen=True)
class Root:
    value: Any
    multiplicity: int
    exact: bool


def _trim(p, field):
    p = list(p)
    while p and field.is_zero(p[-1]):
        p.pop()
    return p


def poly_eval(p, x):
    acc = 0 * x
    for c in reversed(p):
        acc = acc * x + c
    return acc


def poly_divmod(num, den, field):
    """Long division of coefficient lists (lowest degree first)."""
    num = list(num)
    den = _trim(den, field)
    if not den:
        raise ZeroDivisionError("polynomial division by zero")
    if len(num) < len(den):
        return [field.zero], num
    q = [field.zero] * (len(num) - len(den) + 1)
    lead = den[-1]
    for i in range(len(num) - len(den), -1, -1):
        c = num[i + len(den) - 1] / lead
        q[i] = c
        for j, d in enumerate(den):
            num[i + j] = num[i + j] - c * d
    return q, _trim(num[: len(den) - 1], field) or [field.zero]


def _derivative(p):
    return [j * p[j] for j in range(1, len(p))]


def poly_gcd(a, b, field):
    a, b = _trim(a, field), _trim(b, field)
    while b:
        _, r = poly_divmod(a, b, field)
        a, b = b, _trim(r, field)
    return [c / a[-1] for c in a]


def aberth(p: list[complex], max_iter: int = 500, tol: float = RESIDUAL_TOL) -> list[complex]:
    """All roots of ``p`` (lowest degree first, nonzero leading coefficient)."""
    n = len(p) - 1
    if n < 1:
        return []
    lead = p[-1]
    monic = [c / lead for c in p]
    radius = 1 + max(abs(c) for c in monic[:-1])
    z = [radius * 0.5 * cmath.exp(2j * math.pi * (k + 0.25) / n) for k in range(n)]
    dp = _derivative(monic)
    scale = sum(abs(c) for c in monic)
    for _ in range(max_iter):
        moved = 0.0
        for k in range(n):
            pk = poly_eval(monic, z[k])
            if pk == 0:
                continue
            ratio = pk / poly_eval(dp, z[k])
            repulsion = sum(1 / (z[k] - z[j]) for j in range(n) if j != k and z[k] != z[j])
            step = ratio / (1 - ratio * repulsion)
            z[k] -= step
            moved = max(moved, abs(step))
        if moved <= tol * max(1.0, max(abs(v) for v in z)):
            break
    worst = max(abs(poly_eval(monic, v)) / scale for v in z)
    if worst > math.sqrt(tol):
        raise RootIsolationFailed(f"root refinement stalled with relative residual {worst:.3g}")
    return z


def _cluster(values: list[complex], radius: float):
    clusters: list[list[complex]] = []
    for v in values:
        for c in clusters:
            if abs(c[0] - v) <= radius * max(1.0, abs(v)):
                c.append(v)
                break
        else:
            clusters.append([v])
    return [(sum(c) / len(c), len(c)) for c in clusters]


def _snap(v: complex, bound: int = SNAP_BOUND) -> GaussianRational:
    return GaussianRational(Fraction(v.real).limit_denominator(bound),
                            Fraction(v.imag).limit_denominator(bound))


def poly_roots(coeffs, field) -> list[Root]:
    """Distinct roots with multiplicities, sorted by (real, imag) part."""
    p = _trim([field.coerce(c) for c in coeffs], field)
    if len(p) <= 1:
        return []
    if not field.exact:
        values = aberth([complex(c) for c in p])
        out = [Root(v, m, False) for v, m in _cluster(values, CLUSTER_RADIUS)]
        return sorted(out, key=lambda r: (round(r.value.real, 9), round(r.value.imag, 9)))

    chain = [p]
    while len(chain[-1]) > 1:
        chain.append(_trim(poly_gcd(chain[-1], _derivative(chain[-1]), field), field))
    squarefree, _ = poly_divmod(p, chain[1], field)
    squarefree = _trim(squarefree, field)
    approx = aberth([complex(c) for c in squarefree])
    out: list[Root] = []
    for v in approx:
        cand = _snap(v)
        exact = poly_eval(squarefree, cand) == 0
        # multiplicity = number of members of the gcd chain p, gcd(p, p'), ... vanishing at the root
        m = 0
        for g in chain:
            if len(g) <= 1:
                break
            if exact:
                hit = poly_eval(g, cand) == 0
            else:
                gc = [complex(c) for c in g]
                hit = abs(poly_eval(gc, v)) <= 1e-8 * sum(abs(c) for c in gc)
            if not hit:
                break
            m += 1
        out.append(Root(cand if exact else v, max(m, 1), exact))
    return sorted(out, key=lambda r: (float(complex(r.value).real), float(complex(r.value).imag)))
