"""Request ingestion, stage orchestration and deterministic report emission.

A request is JSON::

    {"one_form": {"A": [[i, j, "re", "im"], ...], "B": [...]},
     "options": {"truncation": 16, "max_depth": 8, "field": "exact",
                 "sector": [R, a1, a2], "commands": ["classify", "index"]}}

Rationals are strings ``"p"`` or ``"p/q"``. Every number in a report is an
object ``{"mode": "exact", "value": "p/q"}`` or
``{"mode": "approx", "value": [re, im], "tol": t}``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field as dc_field
from typing import Any

from .asymptotics import (
    Sector,
    constants_csv,
    cos_counterexample,
    cos_derivative_sequence,
    euler_function,
    euler_ode_residual,
    euler_series,
    left_half_plane,
    right_half_plane,
    saddle_node_model,
    verify_asymptotic,
)
from .bivariate import BivariateSeries, OneForm
from .blowup import reduce
from .errors import FoliateError, ParseError
from .fields import APPROX, EXACT, GaussianRational, parse_rational
from .foliation import SingularityTag, classify_singularity
from .index import camacho_sad_index, verify_index_theorem
from .series import TruncatedSeries
from .transport import fit_holonomy

__all__ = [
    "COMMANDS",
    "CASE_STUDIES",
    "AnalysisRequest",
    "AnalysisReport",
    "parse_request",
    "dump_request",
    "build_form",
    "run_pipeline",
    "run_case_study",
    "emit",
]

# dependency order
COMMANDS = ("classify", "reduce", "index", "verify-index", "holonomy", "asymptotics")
CASE_STUDIES = ("euler", "saddle-node", "cos-counterexample")
HOLONOMY_TOL = 1e-6


@dataclass
class AnalysisRequest:
    A: list
    B: list
    truncation: int = 16
    max_depth: int = 8
    field: str = "exact"
    sector: tuple | None = None
    commands: list = dc_field(default_factory=lambda: ["classify"])
    holonomy_section: float = 0.5
    holonomy_y0: list = dc_field(default_factory=lambda: [1e-3, 2e-3, 3e-3, 4e-3, 5e-3])
    case_study: str | None = None


@dataclass
class AnalysisReport:
    request: AnalysisRequest
    stages: dict
    warnings: list
    graph: Any = None

    @property
    def failed(self) -> bool:
        return any("error" in v for v in self.stages.values())


# -- parsing -----------------------------------------------------------------

def _rational(text, where: str):
    if not isinstance(text, str):
        raise ParseError(where, f"expected a rational string, got {type(text).__name__}")
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise ParseError(where, str(exc)) from None


def _monomials(raw, where: str, N: int) -> list:
    if not isinstance(raw, list):
        raise ParseError(where, "expected a list of [i, j, re, im] entries")
    out = []
    for n, entry in enumerate(raw):
        loc = f"{where}[{n}]"
        if not isinstance(entry, list) or len(entry) not in (3, 4):
            raise ParseError(loc, "expected [i, j, re] or [i, j, re, im]")
        i, j = entry[0], entry[1]
        for name, e in (("i", i), ("j", j)):
            if not isinstance(e, int) or isinstance(e, bool) or e < 0:
                raise ParseError(f"{loc}.{name}", f"exponent must be a non-negative integer, got {e!r}")
        if i + j >= N:
            raise ParseError(loc, f"monomial x^{i} y^{j} is beyond truncation {N}")
        re_ = _rational(entry[2], f"{loc}.re")
        im_ = _rational(entry[3], f"{loc}.im") if len(entry) == 4 else _rational("0", f"{loc}.im")
        out.append([i, j, str(re_), str(im_)])
    return out


def _number(raw, where: str, positive: bool = False) -> float:
    if isinstance(raw, bool) or not isinstance(raw, (int, float)):
        raise ParseError(where, f"expected a number, got {raw!r}")
    v = float(raw)
    if not math.isfinite(v) or (positive and v <= 0):
        raise ParseError(where, f"invalid value {raw!r}")
    return v


def parse_request(data) -> AnalysisRequest:
    """Validate a request given as JSON text, bytes or an already decoded dict."""
    if isinstance(data, (str, bytes)):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise ParseError(f"line {exc.lineno} column {exc.colno}", exc.msg) from None
    if not isinstance(data, dict):
        raise ParseError("$", "request must be a JSON object")
    opts = data.get("options", {})
    if not isinstance(opts, dict):
        raise ParseError("options", "must be an object")
    unknown = set(opts) - {"truncation", "max_depth", "field", "sector", "commands",
                           "holonomy_section", "holonomy_y0", "case_study"}
    if unknown:
        raise ParseError(f"options.{sorted(unknown)[0]}", "unknown option")
    N = opts.get("truncation", 16)
    if not isinstance(N, int) or isinstance(N, bool) or N < 2:
        raise ParseError("options.truncation", f"must be an integer >= 2, got {N!r}")
    depth = opts.get("max_depth", 8)
    if not isinstance(depth, int) or isinstance(depth, bool) or depth < 0:
        raise ParseError("options.max_depth", f"must be a non-negative integer, got {depth!r}")
    fld = opts.get("field", "exact")
    if fld not in ("exact", "approx"):
        raise ParseError("options.field", f"must be 'exact' or 'approx', got {fld!r}")
    sector = opts.get("sector")
    if sector is not None:
        if not isinstance(sector, list) or len(sector) != 3:
            raise ParseError("options.sector", "expected [R, alpha1, alpha2]")
        sector = tuple(_number(v, f"options.sector[{n}]") for n, v in enumerate(sector))
        try:
            Sector(*sector)
        except ValueError as exc:
            raise ParseError("options.sector", str(exc)) from None
    commands = opts.get("commands", ["classify"])
    if not isinstance(commands, list) or not commands:
        raise ParseError("options.commands", "expected a non-empty list")
    for n, c in enumerate(commands):
        if c not in COMMANDS:
            raise ParseError(f"options.commands[{n}]", f"unknown command {c!r}")
    case = opts.get("case_study")
    if case is not None and case not in CASE_STUDIES:
        raise ParseError("options.case_study", f"unknown case study {case!r}")
    section = _number(opts.get("holonomy_section", 0.5), "options.holonomy_section", positive=True)
    y0 = opts.get("holonomy_y0", [1e-3, 2e-3, 3e-3, 4e-3, 5e-3])
    if not isinstance(y0, list) or not y0:
        raise ParseError("options.holonomy_y0", "expected a non-empty list of numbers")
    y0 = [_number(v, f"options.holonomy_y0[{n}]", positive=True) for n, v in enumerate(y0)]

    form = data.get("one_form")
    if not isinstance(form, dict) or "A" not in form or "B" not in form:
        raise ParseError("one_form", "expected an object with monomial lists A and B")
    A = _monomials(form["A"], "one_form.A", N)
    B = _monomials(form["B"], "one_form.B", N)
    return AnalysisRequest(A, B, N, depth, fld, sector, list(commands), section, y0, case)


def _request_dict(req: AnalysisRequest) -> dict:
    opts = {"truncation": req.truncation, "max_depth": req.max_depth, "field": req.field,
            "commands": list(req.commands), "holonomy_section": req.holonomy_section,
            "holonomy_y0": list(req.holonomy_y0)}
    if req.sector is not None:
        opts["sector"] = list(req.sector)
    if req.case_study is not None:
        opts["case_study"] = req.case_study
    return {"one_form": {"A": req.A, "B": req.B}, "options": opts}


def dump_request(req: AnalysisRequest) -> str:
    return json.dumps(_request_dict(req), sort_keys=True, indent=2) + "\n"


def build_form(req: AnalysisRequest) -> OneForm:
    """Exact form from the request; converted to doubles in approximate mode."""
    def terms(mon):
        return [(i, j, GaussianRational(parse_rational(re_), parse_rational(im_))) for i, j, re_, im_ in mon]

    w = OneForm(BivariateSeries(terms(req.A), req.truncation, EXACT),
                BivariateSeries(terms(req.B), req.truncation, EXACT))
    return w if req.field == "exact" else w.to_field(APPROX)


# -- number encoding ---------------------------------------------------------

def _num(v, tol: float | None = None) -> dict:
    if v is None:
        return None
    if isinstance(v, GaussianRational):
        return {"mode": "exact", "value": str(v)}
    if isinstance(v, bool):
        return v
    if isinstance(v, int):
        return {"mode": "exact", "value": str(v)}
    c = complex(v)
    return {"mode": "approx", "value": [_float(c.real), _float(c.imag)],
            "tol": APPROX.tol if tol is None else tol}


def _float(x: float):
    # repr round-trips; non-finite values are spelled out so the JSON stays strict
    return x if math.isfinite(x) else repr(x)


def _error(exc: Exception) -> dict:
    return {"error": {"type": type(exc).__name__, "message": str(exc)}}


# -- stages ------------------------------------------------------------------

def _classification(cls) -> dict:
    out = {"tag": cls.tag.value, "exact": cls.exact, "probable": cls.probable}
    if cls.lam is not None:
        out["lambda"] = _num(cls.lam)
    if cls.p is not None:
        out["p"] = cls.p
    if cls.eigenvalues is not None:
        out["eigenvalues"] = [_num(e) for e in cls.eigenvalues]
    if cls.note:
        out["note"] = cls.note
    return out


def _stage_classify(w, req, ctx):
    cls = classify_singularity(w)
    ctx["classification"] = cls
    return _classification(cls)


def _graph_summary(graph, verdict) -> dict:
    checks = verify_index_theorem(graph)
    return {
        "verdict": verdict.value,
        "blowups": len(graph.blowup_history),
        "components": [{"id": c.id, "self_intersection": c.self_intersection,
                        "dicritical": c.dicritical, "created_at": c.created_at}
                       for c in graph.components],
        "corners": [{"components": sorted([a, b]), "singularity": sid}
                    for a, b, sid in sorted(graph.corners, key=lambda e: sorted(e[:2]))],
        "singularities": [{"id": s.id, "label": s.label, "depth": s.depth,
                           "classification": _classification(s.classification),
                           "resolved": s.resolved,
                           "indices": {f"E{cid}": _num(v) for cid, v in sorted(s.indices.items())},
                           "index_errors": {f"E{cid}": e for cid, e in sorted(s.index_errors.items())}}
                          for s in graph.singularities],
        "index_theorem": [{"component": f"E{c.component}", "status": c.status,
                           "sum_of_indices": _num(c.sum_of_indices),
                           "self_intersection": c.self_intersection, "match": c.match}
                          for c in checks],
        "shape_ok": graph.check_shape(),
    }


def _capped_depth(w, depth: int, ctx) -> int:
    k0 = w.lowest_order()
    cap = max(0, (w.order - 4) // max(k0, 1))
    if depth > cap:
        ctx["warnings"].append(f"max_depth {depth} capped at {cap} by truncation {w.order}")
        return cap
    return depth


def _stage_reduce(w, req, ctx, force=False):
    depth = _capped_depth(w, max(1, req.max_depth) if force else req.max_depth, ctx)
    graph, verdict = reduce(w, depth, blow_up_origin=force)
    ctx["graph"] = graph
    ctx["warnings"].extend(graph.warnings)
    return _graph_summary(graph, verdict)


def _stage_index(w, req, ctx):
    out = {}
    for axis in ("y=0", "x=0"):
        try:
            out[axis] = _num(camacho_sad_index(w, axis).index)
        except FoliateError as exc:
            out[axis] = _error(exc)
    return out


def _stage_verify_index(w, req, ctx):
    return _stage_reduce(w, req, ctx, force=True)


def _stage_holonomy(w, req, ctx):
    wa = w.to_field(APPROX)
    sample = fit_holonomy(wa, req.holonomy_section, req.holonomy_y0)
    return {"section_x": req.holonomy_section,
            "inputs": [_num(v, 0.0) for v in sample.inputs],
            "images": [_num(v, HOLONOMY_TOL) for v in sample.images],
            "multiplier": _num(sample.fitted_multiplier, HOLONOMY_TOL)}


def _verdict_dict(v) -> dict:
    return {"verdict": v.verdict.value, "k_max": v.k_max, "samples": v.samples_used,
            "constants": [_num(c, 0.0) for c in v.per_k_constants],
            "table": [[_float(c) for c in row] for row in v.table],
            "radii": [_float(r) for r in v.radii]}


def _sector(req, default: Sector) -> Sector:
    return Sector(*req.sector) if req.sector is not None else default


def run_case_study(name: str, sector: Sector | None = None, k_max: int | None = None) -> dict:
    """One of the built-in asymptotics demonstrations as a report fragment."""
    if name == "euler":
        s = sector or right_half_plane(0.2)
        v = verify_asymptotic(euler_function, euler_series(16), s, k_max or 6)
        return {"case": name, "E(0.1)": _num(euler_function(0.1), 1e-12),
                "ode_residual_at_0.2": _num(euler_ode_residual(0.2), 0.0), **_verdict_dict(v),
                "csv": constants_csv(v)}
    if name == "saddle-node":
        model = saddle_node_model(1, 0)
        s = sector or left_half_plane(0.05)
        v = model.zero_expansion_verdict(s, k_max or 8)
        starts = [(1.0, complex(-0.05 - 0.01 * n, 0.02 * (n - 5))) for n in range(10)]
        devs = [model.trajectory_deviation(x0, y0, 2.0) for x0, y0 in starts]
        return {"case": name, "trajectory_max_deviation": _num(max(devs), 1e-6), **_verdict_dict(v),
                "csv": constants_csv(v)}
    if name == "cos-counterexample":
        s = sector or Sector(1.0, -math.pi / 6, math.pi / 6)
        v = verify_asymptotic(cos_counterexample, TruncatedSeries([0], 9, APPROX), s, k_max or 8)
        seq = cos_derivative_sequence()
        first = next((n + 1 for n, d in enumerate(seq) if d > 1e6), None)
        return {"case": name, "derivative_monotone": all(b > a for a, b in zip(seq, seq[1:])),
                "first_n_beyond_1e6": first, **_verdict_dict(v), "csv": constants_csv(v)}
    raise ValueError(f"unknown case study {name!r}")


def _stage_asymptotics(w, req, ctx):
    if req.case_study is not None:
        return run_case_study(req.case_study, Sector(*req.sector) if req.sector else None)
    cls = ctx.get("classification") or classify_singularity(w)
    if cls.tag != SingularityTag.SADDLE_NODE:
        return {"applicable": False, "note": "first-integral check runs at saddle-nodes only"}
    # F = x y^(-lam) exp(1/(p y^p)) of the normal form, on a sector where it is flat
    model = saddle_node_model(cls.p, complex(cls.lam))
    s = _sector(req, model.zero_expansion_sector())
    v = model.zero_expansion_verdict(s, min(8, req.truncation))
    return {"applicable": True, "p": cls.p, "lambda": _num(cls.lam), **_verdict_dict(v)}


_STAGES = {
    "classify": _stage_classify,
    "reduce": _stage_reduce,
    "index": _stage_index,
    "verify-index": _stage_verify_index,
    "holonomy": _stage_holonomy,
    "asymptotics": _stage_asymptotics,
}


def run_pipeline(req: AnalysisRequest | dict | str) -> AnalysisReport:
    """Run the requested stages in dependency order; failures stay local to a stage."""
    if not isinstance(req, AnalysisRequest):
        req = parse_request(req)
    w = build_form(req)
    ctx = {"warnings": []}
    stages = {}
    for name in COMMANDS:
        if name not in req.commands:
            continue
        try:
            stages[name] = _STAGES[name](w, req, ctx)
        except (FoliateError, ArithmeticError, ValueError) as exc:
            stages[name] = _error(exc)
    if req.field == "approx":
        ctx["warnings"].append(f"approximate mode, comparisons at tolerance {APPROX.tol}")
    return AnalysisReport(req, stages, ctx["warnings"], ctx.get("graph"))


# -- emission ----------------------------------------------------------------

def _text(report: AnalysisReport) -> str:
    lines = []
    for name, body in report.stages.items():
        if "error" in body:
            lines.append(f"{name}: FAILED {body['error']['type']}: {body['error']['message']}")
            continue
        if name == "classify":
            extra = ""
            if "p" in body:
                extra += f" p={body['p']}"
            if "lambda" in body:
                extra += f" lambda={_plain(body['lambda'])}"
            lines.append(f"classify: {body['tag']}{extra}")
        elif name in ("reduce", "verify-index"):
            lines.append(f"{name}: {body['verdict']} after {body['blowups']} blow-up(s)")
            for c in body["index_theorem"]:
                lines.append(f"  E{c['component'][1:]} self-intersection {c['self_intersection']}: "
                             f"{c['status']} (sum {_plain(c['sum_of_indices'])})")
        elif name == "index":
            lines.append("index: " + ", ".join(
                f"{axis} {'unavailable' if isinstance(v, dict) and 'error' in v else _plain(v)}"
                for axis, v in body.items()))
        elif name == "holonomy":
            lines.append(f"holonomy: multiplier {_plain(body['multiplier'])}")
        elif name == "asymptotics":
            lines.append(f"asymptotics: {body.get('verdict', 'not applicable')}")
    for wmsg in report.warnings:
        lines.append(f"warning: {wmsg}")
    return "\n".join(lines) + "\n"


def _plain(n) -> str:
    if n is None:
        return "n/a"
    if n.get("mode") == "exact":
        return n["value"]
    re_, im_ = n["value"]
    return f"{re_:.10g}{im_:+.10g}i" if isinstance(re_, float) and isinstance(im_, float) else str(n["value"])


def emit(report: AnalysisReport, fmt: str = "json") -> bytes:
    """Deterministic serialization: sorted keys, canonical rational strings."""
    if fmt == "json":
        body = {"request": _request_dict(report.request), "stages": report.stages,
                "warnings": list(report.warnings)}
        return (json.dumps(body, sort_keys=True, indent=2) + "\n").encode()
    if fmt == "dot":
        if report.graph is None:
            return b"graph divisor {\n}\n"
        return report.graph.to_dot().encode()
    if fmt == "text":
        return _text(report).encode()
    raise ValueError(f"unknown format {fmt!r}")
