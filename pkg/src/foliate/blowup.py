"""Quadratic blow-ups of 1-forms and the reduction driver.

Chart ``XT``: ``y = t x``, divisor ``{x = 0}``. Chart ``SY``: ``x = s y``,
divisor ``{y = 0}``. For ``omega = A dx + B dy`` the pullbacks are

* ``(A + t B) dx + x B dt``  in ``XT``,
* ``y A ds + (s A + B) dy``  in ``SY``,

divided by ``divisor^k`` (non-dicritical) or ``divisor^(k+1)`` (dicritical),
where ``k`` is the multiplicity of ``omega``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field as dc_field
from enum import Enum
from typing import Any

from .bivariate import SY_WEIGHTS, XT_WEIGHTS, BivariateSeries, OneForm
from .errors import FoliateError, TruncationTooShort
from .fields import APPROX
from .foliation import (
    SingularityClass,
    SingularityTag,
    classify_singularity,
    multiplicity_and_jets,
    tangent_cone_R,
)
from .index import camacho_sad_index
from .polyroots import poly_roots

__all__ = [
    "ChartForm",
    "blowup_pullback",
    "DivisorPoint",
    "divisor_singularities",
    "Component",
    "Singularity",
    "BlowupRecord",
    "DivisorGraph",
    "Verdict",
    "reduce",
]


def _times_monomial(f: BivariateSeries, di: int, dj: int) -> BivariateSeries:
    wx, wy = f.weights
    return BivariateSeries._raw({(i + di, j + dj): c for (i, j), c in f.coeffs.items()},
                                f.order + wx * di + wy * dj, f.field, f.weights)


@dataclass(frozen=True)
class ChartForm:
    form: OneForm
    chart: str
    divisor_power_divided: int

    def form_at(self, center=0, field=None) -> OneForm:
        """Germ of the chart form at the divisor point ``t = center`` (or ``s = center``)."""
        fld = field or self.form.field
        A = self.form.A.to_field(fld) if fld != self.form.A.field else self.form.A
        B = self.form.B.to_field(fld) if fld != self.form.B.field else self.form.B
        return OneForm(A.localize(center, fld), B.localize(center, fld))

    def divisor_invariant(self) -> bool:
        """The divisor coordinate divides the coefficient of the other differential."""
        coeff = self.form.B if self.chart == "XT" else self.form.A
        axis = 0 if self.chart == "XT" else 1
        return all(coeff.field.is_zero(c) for key, c in coeff.coeffs.items() if key[axis] == 0)


def blowup_pullback(w: OneForm):
    """Strict transforms in both charts and the dicritical flag."""
    k, _, _ = multiplicity_and_jets(w)
    _, dicritical = tangent_cone_R(w)
    A, B = w.A, w.B
    power = k + 1 if dicritical else k
    if w.order - power < 1:
        raise TruncationTooShort(f"blow-up divides by x^{power} but the form is known below degree {w.order}")
    n = w.order

    Ax, Bx = A.pullback_xt(), B.pullback_xt()
    dx_coeff = (Ax + _times_monomial(Bx, 0, 1)).truncate(n)
    dt_coeff = _times_monomial(Bx, 1, 0).truncate(n)
    xt = OneForm(dx_coeff.divide_by_divisor(power), dt_coeff.divide_by_divisor(power))

    As, Bs = A.pullback_sy(), B.pullback_sy()
    ds_coeff = _times_monomial(As, 0, 1).truncate(n)
    dy_coeff = (_times_monomial(As, 1, 0) + Bs).truncate(n)
    sy = OneForm(ds_coeff.divide_by_divisor(power), dy_coeff.divide_by_divisor(power))
    return ChartForm(xt, "XT", power), ChartForm(sy, "SY", power), dicritical


@dataclass(frozen=True)
class DivisorPoint:
    chart: str
    coordinate: Any
    exact: bool
    form: OneForm
    classification: SingularityClass
    multiplicity: int = 1


def _candidate_points(w: OneForm, dicritical: bool):
    """Divisor points that may be singular: ``(XT roots, SY origin flag)``.

    Non-dicritical: zeros of ``R(1, t)`` and the ``SY`` origin when
    ``R(0, 1) = 0``. Dicritical: zeros of ``B_k(1, t)`` (tangency with the
    divisor) and the ``SY`` origin when ``A_k(0, 1) = 0``; each candidate is
    then classified and regular ones are dropped.
    """
    k, Ak, Bk = multiplicity_and_jets(w)
    F = w.field
    if not dicritical:
        R, _ = tangent_cone_R(w)
        poly = [R[(k + 1 - j, j)] for j in range(k + 2)]
        at_infinity = F.is_zero(R[(0, k + 1)])
    else:
        poly = [Bk[(k - j, j)] for j in range(k + 1)]
        at_infinity = F.is_zero(Ak[(0, k)])
    return poly_roots(poly, F), at_infinity


def divisor_singularities(xt: ChartForm, sy: ChartForm, original: OneForm | None = None,
                          warnings: list | None = None) -> list[DivisorPoint]:
    """Singular points on the exceptional divisor with their classifications.

    Without ``original`` the candidates are read from the chart forms
    themselves: the zeros of the divisor restriction of the ``dx``
    coefficient in ``XT`` (or of ``dt`` when the divisor is not invariant).
    """
    F = xt.form.field
    if original is not None:
        _, dicritical = tangent_cone_R(original)
        roots, at_infinity = _candidate_points(original, dicritical)
    else:
        dicritical = not xt.divisor_invariant()
        # divisor restriction of the coefficient whose zeros mark candidate points
        poly_map = (xt.form.B if dicritical else xt.form.A).divisor_coefficient(0)
        deg = max(poly_map, default=0)
        roots = poly_roots([poly_map.get(j, F.zero) for j in range(deg + 1)], F)
        sy_poly = (sy.form.A if dicritical else sy.form.B).divisor_coefficient(0)
        at_infinity = F.is_zero(sy_poly.get(0, F.zero))
    out = []
    for r in roots:
        fld = F if r.exact else (APPROX if F.exact else F)
        if not r.exact and F.exact and warnings is not None:
            warnings.append(f"divisor point t={complex(r.value):.12g} is not a Gaussian rational; "
                            "branch continues in approximate mode")
        local = xt.form_at(r.value, fld)
        cls = classify_singularity(local)
        if cls.tag == SingularityTag.REGULAR:
            continue
        out.append(DivisorPoint("XT", r.value, r.exact, local, cls, r.multiplicity))
    if at_infinity:
        local = sy.form_at(0)
        cls = classify_singularity(local)
        if cls.tag != SingularityTag.REGULAR:
            out.append(DivisorPoint("SY", F.zero, True, local, cls))
    return out


# -- reduction -------------------------------------------------------------

class Verdict(str, Enum):
    ALL_IRREDUCIBLE = "AllIrreducible"
    DICRITICAL_DETECTED = "DicriticalDetected"
    DEPTH_EXCEEDED = "DepthExceeded"


@dataclass
class Component:
    id: int
    self_intersection: int
    dicritical: bool
    created_at: str


@dataclass
class Singularity:
    id: int
    label: str
    chart_path: tuple
    coordinate: Any
    depth: int
    classification: SingularityClass
    exact: bool
    axis_components: dict          # {"x=0": component id or None, "y=0": ...}
    indices: dict = dc_field(default_factory=dict)
    index_errors: dict = dc_field(default_factory=dict)
    resolved: bool = True
    form: OneForm | None = None

    @property
    def components(self) -> set:
        return {c for c in self.axis_components.values() if c is not None}


@dataclass
class BlowupRecord:
    label: str
    depth: int
    chart_path: tuple
    coordinate: Any
    multiplicity: int
    dicritical: bool
    new_component: int


@dataclass
class DivisorGraph:
    field: Any
    components: list = dc_field(default_factory=list)
    corners: list = dc_field(default_factory=list)
    singularities: list = dc_field(default_factory=list)
    blowup_history: list = dc_field(default_factory=list)
    warnings: list = dc_field(default_factory=list)

    def component(self, cid: int) -> Component:
        return self.components[cid - 1]

    def corner_singularity(self, a: int, b: int):
        for c1, c2, sid in self.corners:
            if {c1, c2} == {a, b}:
                return sid
        return None

    def check_shape(self) -> bool:
        """No cycles (a forest of components) and no point on three components."""
        parent = {c.id: c.id for c in self.components}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for a, b, _ in self.corners:
            ra, rb = find(a), find(b)
            if ra == rb:
                return False
            parent[ra] = rb
        return all(len(s.components) <= 2 for s in self.singularities)

    def to_dot(self) -> str:
        lines = ["graph divisor {", "  node [shape=circle];"]
        for c in self.components:
            style = ', style=dashed' if c.dicritical else ''
            lines.append(f'  E{c.id} [label="E{c.id}\\n{c.self_intersection}"{style}];')
        for a, b, sid in sorted(self.corners, key=lambda e: (min(e[0], e[1]), max(e[0], e[1]))):
            label = f' [label="q{sid}"]' if sid is not None else ""
            lines.append(f"  E{min(a, b)} -- E{max(a, b)}{label};")
        for s in self.singularities:
            tag = s.classification.tag.value
            lines.append(f'  q{s.id} [shape=box, label="q{s.id} {tag}"];')
            for cid in sorted(s.components):
                idx = s.indices.get(cid)
                text = "?" if idx is None else _fmt(idx)
                lines.append(f'  q{s.id} -- E{cid} [style=dotted, label="{text}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _fmt(v) -> str:
    if isinstance(v, complex):
        return f"{v.real:.10g}{v.imag:+.10g}i"
    return str(v)


@dataclass
class _Pending:
    form: OneForm
    on_x0: int | None
    on_y0: int | None
    depth: int
    label: str
    chart_path: tuple
    coordinate: Any
    exact: bool
    classification: SingularityClass | None = None


def _record_singularity(graph: DivisorGraph, pt: _Pending, resolved: bool) -> Singularity:
    sing = Singularity(id=len(graph.singularities) + 1, label=pt.label, chart_path=pt.chart_path,
                       coordinate=pt.coordinate, depth=pt.depth, classification=pt.classification,
                       exact=pt.exact, axis_components={"x=0": pt.on_x0, "y=0": pt.on_y0},
                       resolved=resolved, form=pt.form)
    for axis, cid in (("x=0", pt.on_x0), ("y=0", pt.on_y0)):
        if cid is None or graph.component(cid).dicritical:
            continue
        try:
            sing.indices[cid] = camacho_sad_index(pt.form, axis).index
        except FoliateError as exc:
            sing.index_errors[cid] = f"{type(exc).__name__}: {exc}"
    graph.singularities.append(sing)
    if pt.on_x0 is not None and pt.on_y0 is not None:
        for i, (a, b, sid) in enumerate(graph.corners):
            if {a, b} == {pt.on_x0, pt.on_y0}:
                graph.corners[i] = (a, b, sing.id)
    return sing


def reduce(w: OneForm, max_depth: int = 12, N: int | None = None, blow_up_origin: bool = False):
    """Breadth-first reduction of the singularity at the origin.

    Returns ``(graph, verdict)``. Points that are non-degenerate or
    saddle-nodes are kept; every other singular point is blown up until
    ``max_depth`` nested blow-ups have been spent. ``blow_up_origin`` blows
    up a singular origin even when it is already irreducible, which exposes
    the index theorem on a single divisor.
    """
    if N is not None:
        w = OneForm(w.A.truncate(N), w.B.truncate(N))
    k0, _, _ = multiplicity_and_jets(w)
    required = max_depth * k0 + 4
    if w.order < required:
        raise TruncationTooShort(
            f"truncation {w.order} too short for depth {max_depth} at multiplicity {k0}; need {required}")
    graph = DivisorGraph(field=w.field)
    queue = deque([_Pending(w, None, None, 0, "origin", (), None, w.field.exact)])
    depth_hit = False
    while queue:
        pt = queue.popleft()
        try:
            cls = pt.classification or classify_singularity(pt.form)
        except FoliateError as exc:
            graph.warnings.append(f"{pt.label}: classification failed ({type(exc).__name__}: {exc})")
            cls = SingularityClass(SingularityTag.DEGENERATE, exact=pt.exact,
                                   note=f"classification failed: {exc}")
        pt.classification = cls
        if cls.tag == SingularityTag.REGULAR:
            continue
        if cls.irreducible and not (blow_up_origin and pt.depth == 0):
            _record_singularity(graph, pt, resolved=True)
            continue
        if pt.depth >= max_depth:
            depth_hit = True
            _record_singularity(graph, pt, resolved=False)
            continue
        try:
            xt, sy, dicritical = blowup_pullback(pt.form)
            k, _, _ = multiplicity_and_jets(pt.form)
            points = divisor_singularities(xt, sy, pt.form, graph.warnings)
        except FoliateError as exc:
            graph.warnings.append(f"{pt.label}: blow-up failed ({type(exc).__name__}: {exc})")
            _record_singularity(graph, pt, resolved=False)
            depth_hit = True
            continue
        a, b = pt.on_x0, pt.on_y0
        E = Component(id=len(graph.components) + 1, self_intersection=-1,
                      dicritical=dicritical, created_at=pt.label)
        graph.components.append(E)
        for cid in (a, b):
            if cid is not None:
                graph.component(cid).self_intersection -= 1
        graph.corners = [c for c in graph.corners if {c[0], c[1]} != {a, b}]
        if b is not None:
            graph.corners.append((E.id, b, None))
        if a is not None:
            graph.corners.append((E.id, a, None))
        graph.blowup_history.append(BlowupRecord(pt.label, pt.depth, pt.chart_path, pt.coordinate,
                                                 k, dicritical, E.id))
        for dp in points:
            if dp.chart == "XT":
                on_y0 = b if _is_zero(dp.coordinate) else None
                child = _Pending(dp.form, E.id, on_y0, pt.depth + 1,
                                 f"{pt.label}/E{E.id}:t={_fmt(dp.coordinate)}",
                                 pt.chart_path + (("XT", _fmt(dp.coordinate)),), dp.coordinate,
                                 pt.exact and dp.exact, dp.classification)
            else:
                child = _Pending(dp.form, a, E.id, pt.depth + 1, f"{pt.label}/E{E.id}:s=0",
                                 pt.chart_path + (("SY", "0"),), dp.coordinate, pt.exact,
                                 dp.classification)
            queue.append(child)
    if depth_hit:
        verdict = Verdict.DEPTH_EXCEEDED
    elif any(c.dicritical for c in graph.components):
        verdict = Verdict.DICRITICAL_DETECTED
    else:
        verdict = Verdict.ALL_IRREDUCIBLE
    return graph, verdict


def _is_zero(v) -> bool:
    return abs(complex(v)) == 0 if isinstance(v, complex) else not v
