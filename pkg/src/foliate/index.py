"""Camacho-Sad indices, formal separatrices and gradient-form checks."""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Any

from .bivariate import BivariateSeries, OneForm
from .errors import (
    AxisNotInvariant,
    DenominatorVanishes,
    Resonance,
    TruncationTooShort,
    ZeroLinearPart,
)
from .series import TruncatedSeries, invert, multiply

__all__ = [
    "IndexReport",
    "FormalSeparatrix",
    "camacho_sad_index",
    "formal_separatrix",
    "separatrix_residual",
    "verify_index_theorem",
    "index_transform_check",
    "gradient_form_checks",
    "ComponentCheck",
]

GRAPH_OVER_X = "GraphOverX"
GRAPH_OVER_Y = "GraphOverY"


@dataclass(frozen=True)
class IndexReport:
    index: Any
    separatrix: str
    residue_valuation_data: dict = dc_field(default_factory=dict)


@dataclass(frozen=True)
class FormalSeparatrix:
    orientation: str
    s: TruncatedSeries


def camacho_sad_index(w: OneForm, axis: str = "y=0") -> IndexReport:
    """Index of the invariant axis: ``-Res_{x=0} d/dy (A/B)(x, 0)``.

    ``axis="x=0"`` exchanges the coordinates first. The quotient is expanded
    as ``n(x)/d(x)`` with ``n = (A_y B - A B_y)(x, 0)`` and ``d = B(x, 0)^2``.
    """
    if axis == "x=0":
        w = w.swap()
    elif axis != "y=0":
        raise ValueError(f"axis must be 'y=0' or 'x=0', got {axis!r}")
    F = w.field
    A0 = w.A.restrict_y0()
    if not A0.is_zero():
        raise AxisNotInvariant(f"A(x,0) does not vanish: {A0!r}")
    B0 = w.B.restrict_y0()
    # A(x, 0) vanishes identically, so n(x) reduces to A_y(x, 0) B(x, 0)
    Ay0 = w.A.dy().restrict_y0()
    n = multiply(Ay0.to_field(F), B0.to_field(F))
    d = multiply(B0, B0)
    v = d.valuation
    if v == math.inf:
        raise DenominatorVanishes("B(x, 0) vanishes to the working truncation")
    # n/d = x^(-v) * n * (d / x^v)^(-1); the residue is the x^(v-1) coefficient of the product
    if v - 1 >= n.order or d.order - v < v:
        raise TruncationTooShort(f"need {2 * v} orders to reach the residue, have {d.order}")
    unit_inv = invert(d.shift_down(v).truncate(v) if v else d.truncate(1))
    if v == 0:
        residue = F.zero
    else:
        prod = multiply(n.truncate(v), unit_inv)
        residue = prod[v - 1]
    return IndexReport(index=-residue, separatrix=axis,
                       residue_valuation_data={"denominator_valuation": v,
                                               "numerator_valuation": n.valuation})


def _linear_coefficients(w: OneForm):
    A, B = w.A, w.B
    return A[(1, 0)], A[(0, 1)], B[(1, 0)], B[(0, 1)]


def separatrix_residual(w: OneForm, s: TruncatedSeries) -> TruncatedSeries:
    """``A(x, s) + B(x, s) s'`` modulo ``x^{s.order}`` for a graph ``y = s(x)``.

    Valid at a singular point: ``B(0, 0) = 0`` keeps the top coefficient
    independent of the next, unknown, coefficient of ``s``.
    """
    M = s.order
    sp = s.padded(M + 1)
    As = w.A.substitute_y(sp)
    Bs = w.B.substitute_y(sp)
    prod = multiply(Bs, sp.derivative())
    return (As.truncate(M) if As.order >= M else As) + prod.truncate(min(M, prod.order))


def formal_separatrix(w: OneForm, orientation: str = GRAPH_OVER_X) -> FormalSeparatrix:
    """Invariant formal graph tangent to the chosen axis.

    For ``GraphOverX`` solve ``A(x, s) + B(x, s) s' = 0`` with
    ``s = sum_{j>=2} c_j x^j``; the ``x^j`` coefficient is affine in ``c_j``
    with slope ``L_j = a01 + j b10``. ``GraphOverY`` swaps the coordinates.
    """
    if orientation == GRAPH_OVER_Y:
        w = w.swap()
    elif orientation != GRAPH_OVER_X:
        raise ValueError(f"unknown orientation {orientation!r}")
    F = w.field
    if not (F.is_zero(w.A[(0, 0)]) and F.is_zero(w.B[(0, 0)])):
        raise ValueError("formal separatrices are solved at singular points only")
    a10, a01, b10, b01 = _linear_coefficients(w)
    if all(F.is_zero(c) for c in (a10, a01, b10, b01)):
        raise ZeroLinearPart("linear part of the form vanishes")
    if not F.is_zero(a10):
        raise AxisNotInvariant("the axis direction is not invariant by the linear part")
    M = w.order - 1
    if M < 2:
        raise TruncationTooShort("need truncation order at least 3")
    cs = [F.zero] * M
    for j in range(2, M):
        s = TruncatedSeries._raw(cs, M, F)
        r = separatrix_residual(w, s)[j]
        L = a01 + j * b10
        if F.is_zero(L):
            if not F.is_zero(r):
                raise Resonance(j)
            continue
        cs[j] = -r / L
    return FormalSeparatrix(orientation, TruncatedSeries._raw(cs, M, F))


@dataclass(frozen=True)
class ComponentCheck:
    component: int
    sum_of_indices: Any
    self_intersection: int
    match: bool | None
    status: str
    indices: list


def verify_index_theorem(graph, approx_tol: float = 1e-9) -> list[ComponentCheck]:
    """Compare, per invariant component, the sum of indices with its self-intersection."""
    out = []
    for comp in graph.components:
        if comp.dicritical:
            out.append(ComponentCheck(comp.id, None, comp.self_intersection, None, "Dicritical", []))
            continue
        indices = []
        failed = None
        for sing in graph.singularities:
            if comp.id not in sing.components:
                continue
            value = sing.indices.get(comp.id)
            if value is None:
                failed = sing.index_errors.get(comp.id, "index unavailable")
                break
            indices.append((sing.id, value))
        if failed is not None:
            out.append(ComponentCheck(comp.id, None, comp.self_intersection, None,
                                      f"Unverifiable: {failed}", indices))
            continue
        exact = all(not isinstance(v, complex) for _, v in indices)
        if exact:
            total = sum((v for _, v in indices), start=graph.field.zero if graph.field.exact else 0)
            match = total == comp.self_intersection
        else:
            total = sum(complex(v) for _, v in indices)
            match = abs(total - comp.self_intersection) <= approx_tol
        out.append(ComponentCheck(comp.id, total, comp.self_intersection, match,
                                  "Verified" if match else "Mismatch", indices))
    return out


def index_transform_check(w: OneForm, axis: str = "y=0") -> dict:
    """Index of an invariant axis before and after one blow-up of the origin.

    The strict transform of ``y = 0`` is ``t = 0`` in the chart ``y = t x``,
    where it meets the divisor ``x = 0`` at the chart origin.
    """
    from .blowup import blowup_pullback

    if axis == "x=0":
        w = w.swap()
    before = camacho_sad_index(w).index
    xt, _, dicritical = blowup_pullback(w)
    if dicritical:
        raise ValueError("index transform is only defined for non-dicritical blow-ups")
    local = xt.form_at(0)
    after = camacho_sad_index(local).index
    F = w.field
    return {"before": before, "after": after, "decremented": F.eq(after, before - 1)}


def gradient_form_checks(Fs: BivariateSeries) -> dict:
    """Checks on ``omega = dF``: ``R = (k+1) F_{k+1}`` and non-dicriticality."""
    from .foliation import multiplicity_and_jets, tangent_cone_R

    field = Fs.field
    if not field.is_zero(Fs[(0, 0)]):
        raise ValueError("F must vanish at the origin")
    omega = OneForm(Fs.dx(), Fs.dy())
    k, _, _ = multiplicity_and_jets(omega)
    R, dicritical = tangent_cone_R(omega)
    target = Fs.homogeneous_part(k + 1) * (k + 1)
    keys = set(R.coeffs) | set(target.coeffs)
    claim = all(field.eq(R[key], target[key]) for key in keys)
    return {"omega": omega, "R": R, "k": k, "claim_holds": claim, "nondicritical": not dicritical}
