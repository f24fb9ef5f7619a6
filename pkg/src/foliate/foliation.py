"""Jets, tangent cone and classification of foliation singularities.

Conventions: the form ``omega = A dx + B dy`` has dual vector field
``X = B d/dx - A d/dy``. Writing ``P = B`` and ``Q = -A`` turns the tangent
cone polynomial ``y P_k - x Q_k`` into ``x A_k + y B_k``, the lowest-order
part of ``omega`` paired with the radial field.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any

from .bivariate import BivariateSeries, OneForm
from .errors import FieldCannotRepresentRoot, TruncationTooShort, ZeroForm
from .index import GRAPH_OVER_Y, camacho_sad_index, formal_separatrix

__all__ = [
    "SingularityTag",
    "SingularityClass",
    "multiplicity_and_jets",
    "tangent_cone_R",
    "classify_singularity",
    "is_positive_rational",
]

# Rationals with denominator <= 1000 and a 1e-9 window cover under 1e-3 of
# the line, so a random irrational rarely passes; larger bounds lose all
# discrimination in double precision.
RATIONAL_PROBE_BOUND = 1000
RATIONAL_PROBE_TOL = 1e-9


class SingularityTag(str, Enum):
    REGULAR = "Regular"
    NON_DEGENERATE = "NonDegenerate"
    SADDLE_NODE = "SaddleNode"
    RESONANT_REDUCIBLE = "ResonantReducible"
    DEGENERATE = "DegenerateNeedsBlowup"


@dataclass(frozen=True)
class SingularityClass:
    tag: SingularityTag
    lam: Any = None
    p: int | None = None
    eigenvalues: tuple | None = None
    exact: bool = True
    probable: bool = False
    note: str = ""

    @property
    def irreducible(self) -> bool:
        return self.tag in (SingularityTag.NON_DEGENERATE, SingularityTag.SADDLE_NODE)


def multiplicity_and_jets(w: OneForm):
    """``(k, A_k, B_k)`` with ``k`` the lowest degree present in ``A`` or ``B``."""
    k = w.lowest_order()
    if k >= w.order:
        raise ZeroForm("1-form vanishes to the working truncation")
    return k, w.A.homogeneous_part(k), w.B.homogeneous_part(k)


def tangent_cone_R(w: OneForm):
    """``(R, dicritical)`` with ``R = x A_k + y B_k`` homogeneous of degree ``k + 1``."""
    k, Ak, Bk = multiplicity_and_jets(w)
    F = w.field
    x = BivariateSeries.x(k + 2, F)
    y = BivariateSeries.y(k + 2, F)
    R = x * _regrade(Ak, k + 2) + y * _regrade(Bk, k + 2)
    dicritical = all(F.is_zero(c) for c in R.coeffs.values())
    return R, dicritical


def _regrade(h: BivariateSeries, order: int) -> BivariateSeries:
    return BivariateSeries._raw(dict(h.coeffs), order, h.field, h.weights)


def is_positive_rational(lam, field, bound: int = RATIONAL_PROBE_BOUND,
                         tol: float = RATIONAL_PROBE_TOL) -> bool:
    """Exact test in Q(i); otherwise a bounded-denominator probe (a 'probable' answer)."""
    if field.exact and not isinstance(lam, complex):
        return lam.is_real and lam.re > 0
    c = complex(lam)
    scale = max(1.0, abs(c))
    if abs(c.imag) > tol * scale or c.real <= 0:
        return False
    q = Fraction(c.real).limit_denominator(bound)
    return abs(float(q) - c.real) <= tol * scale


def _linear_part(w: OneForm):
    """Matrix of the linear part of ``X = B d/dx - A d/dy``."""
    A, B = w.A, w.B
    return [[B[(1, 0)], B[(0, 1)]], [-A[(1, 0)], -A[(0, 1)]]]


def classify_singularity(w: OneForm, bound: int = RATIONAL_PROBE_BOUND) -> SingularityClass:
    """Tag the origin of ``w`` as regular, irreducible or needing a blow-up."""
    F = w.field
    if w.order < 2:
        raise TruncationTooShort("classification needs the linear jet")
    if not (F.is_zero(w.A[(0, 0)]) and F.is_zero(w.B[(0, 0)])):
        return SingularityClass(SingularityTag.REGULAR, exact=F.exact)
    J = _linear_part(w)
    if all(F.is_zero(J[i][j]) for i in range(2) for j in range(2)):
        return SingularityClass(SingularityTag.DEGENERATE, exact=F.exact, note="zero linear part")
    tr = J[0][0] + J[1][1]
    det = J[0][0] * J[1][1] - J[0][1] * J[1][0]
    if F.is_zero(det):
        if F.is_zero(tr):
            return SingularityClass(SingularityTag.DEGENERATE, eigenvalues=(F.zero, F.zero),
                                    exact=F.exact, note="nilpotent linear part")
        return _saddle_node(w, J, tr)

    disc = tr * tr - 4 * det
    try:
        root = F.root(disc, 2)
    except FieldCannotRepresentRoot:
        # irrational quadratic eigenvalues; their ratio is rational only if it is -1
        sq = cmath.sqrt(complex(disc))
        e1, e2 = (complex(tr) + sq) / 2, (complex(tr) - sq) / 2
        lam = F.coerce(-1) if tr == 0 else e2 / e1
        return SingularityClass(SingularityTag.NON_DEGENERATE, lam=lam, eigenvalues=(e1, e2),
                                exact=F.exact and tr == 0, note="eigenvalues outside the field")
    if F.is_zero(J[0][1]) and F.is_zero(J[1][0]):
        e1, e2 = J[0][0], J[1][1]
    else:
        e1, e2 = (tr + root) / 2, (tr - root) / 2
    lam = e2 / e1
    if F.is_zero(disc) and not (F.is_zero(J[0][1]) and F.is_zero(J[1][0])):
        return SingularityClass(SingularityTag.RESONANT_REDUCIBLE, lam=lam, eigenvalues=(e1, e2),
                                exact=F.exact, probable=not F.exact, note="Jordan block")
    if is_positive_rational(lam, F, bound):
        return SingularityClass(SingularityTag.RESONANT_REDUCIBLE, lam=lam, eigenvalues=(e1, e2),
                                exact=F.exact, probable=not F.exact)
    return SingularityClass(SingularityTag.NON_DEGENERATE, lam=lam, eigenvalues=(e1, e2),
                            exact=F.exact, probable=not F.exact)


def _kernel_vector(m, field):
    (a, b), (c, d) = m
    if not (field.is_zero(a) and field.is_zero(b)):
        return (-b, a)
    return (-d, c)


def _saddle_node(w: OneForm, J, tr) -> SingularityClass:
    """Saddle-node data from the formal weak separatrix.

    In the eigenbasis the weak direction is the second axis. The formal
    centre manifold ``x = s(y)`` is straightened to ``x = 0``; then
    ``p + 1`` is the order of the restricted field ``-A(0, y)`` and ``lam``
    is the Camacho-Sad index of the weak separatrix, which both read off
    ``y^(p+1) dx - x (1 + lam y^p) dy`` directly.
    """
    F = w.field
    zero_m = J
    strong_m = [[J[0][0] - tr, J[0][1]], [J[1][0], J[1][1] - tr]]
    vw = _kernel_vector(zero_m, F)
    vs = _kernel_vector(strong_m, F)
    P = [[vs[0], vw[0]], [vs[1], vw[1]]]
    w2 = w.linear_change(P)
    sep = formal_separatrix(w2, GRAPH_OVER_Y)
    w3 = w2.straighten_graph_over_y(sep.s)
    weak_flow = w3.A.swap().restrict_y0()
    v = weak_flow.valuation
    if v == math.inf:
        raise TruncationTooShort("weak direction jet vanishes to the working truncation")
    p = v - 1
    lam = camacho_sad_index(w3, axis="x=0").index
    return SingularityClass(SingularityTag.SADDLE_NODE, lam=lam, p=p, eigenvalues=(tr, F.zero),
                            exact=F.exact)
