"""JSON interchange for models, divisors, reports and MMP traces; DOT output.

Rationals are written as ints when integral and as ``"p/q"`` strings
otherwise.  Readers accept ints and strings, never JSON floats.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any

from .discrepancy import ClassificationReport, PointCertificate, Verdict
from .errors import InvalidModel
from .exactlin import as_rational, format_rational
from .mmp import GoodMinimalModel, MMPStep, MMPTrace, MoriFiberSpace, RayCandidate
from .surface_model import CurveConfig, CurveRecord, Divisor, Point, SingularModel
from .toric import Fan2D, SemiampleWitness

SCHEMA_VERSION = 1


def _bad(msg, **detail):
    return InvalidModel(msg, [{"rule": "schema", "detail": msg, **detail}])


def rational_from_json(x) -> Fraction:
    if isinstance(x, float):
        raise _bad(f"JSON float {x!r} is not exact; write rationals as \"p/q\" strings")
    try:
        return as_rational(x)
    except (TypeError, ValueError) as exc:
        raise _bad(str(exc)) from exc


def divisor_to_json(d: Divisor) -> dict:
    return {c: format_rational(v) for c, v in d.items()}


def divisor_from_json(obj) -> Divisor:
    if obj is None:
        return Divisor()
    if not isinstance(obj, dict):
        raise _bad("a divisor is a JSON object mapping curve ids to rationals")
    return Divisor({str(k): rational_from_json(v) for k, v in obj.items()})


def _int(obj, key, where):
    v = obj.get(key)
    if isinstance(v, bool) or not isinstance(v, int):
        raise _bad(f"{where}: field {key!r} must be an integer", field=key)
    return v


def curve_to_json(c: CurveRecord) -> dict:
    out = {"id": c.id, "self_int": c.self_int, "genus": c.genus, "k_dot": c.k_dot}
    if not c.vertical:
        out["vertical"] = False
    if c.ray is not None:
        out["ray"] = list(c.ray)
    return out


def config_to_json(cfg: CurveConfig) -> dict:
    out: dict[str, Any] = {
        "curves": [curve_to_json(c) for c in cfg.curves],
        "intersections": [[a, b, n] for (a, b), n in cfg.intersections.items()],
        "snc_attested": cfg.snc_attested,
    }
    if cfg.points is not None:
        out["points"] = [{"id": p.id, "curves": list(p.curves)} for p in cfg.points]
    return out


def config_from_json(obj: dict) -> CurveConfig:
    if not isinstance(obj, dict) or "curves" not in obj:
        raise _bad("a curve configuration needs a 'curves' list")
    curves = []
    for i, c in enumerate(obj["curves"]):
        where = f"curves[{i}]"
        if "id" not in c:
            raise _bad(f"{where}: missing id")
        ray = c.get("ray")
        curves.append(CurveRecord(
            str(c["id"]),
            _int(c, "self_int", where),
            _int(c, "genus", where),
            _int(c, "k_dot", where),
            bool(c.get("vertical", True)),
            (int(ray[0]), int(ray[1])) if ray is not None else None,
        ))
    inter = obj.get("intersections", [])
    if isinstance(inter, dict):
        # {"A|B": n} form
        triples = []
        for k, n in inter.items():
            a, _, b = k.partition("|")
            triples.append((a, b, n))
        inter = triples
    triples = []
    for t in inter:
        if len(t) != 3 or isinstance(t[2], bool) or not isinstance(t[2], int):
            raise _bad(f"intersection entry {t!r} must be [id, id, integer]")
        triples.append((str(t[0]), str(t[1]), t[2]))
    points = obj.get("points")
    if points is not None:
        points = [Point(str(p["id"]), tuple(str(x) for x in p["curves"])) for p in points]
    return CurveConfig.build(curves, triples, bool(obj.get("snc_attested", False)), points)


def model_to_json(model: SingularModel) -> dict:
    out = {"schema": SCHEMA_VERSION, **config_to_json(model.config),
           "contracted": sorted(model.contracted)}
    if model.universe is not None:
        out["universe"] = list(model.universe)
    if model.universe_complete:
        out["universe_complete"] = True
    if model.q_factorial_asserted:
        out["q_factorial_asserted"] = True
    return out


def model_from_json(obj: dict) -> SingularModel:
    cfg = config_from_json(obj)
    universe = obj.get("universe")
    return SingularModel(
        cfg,
        frozenset(str(c) for c in obj.get("contracted", [])),
        tuple(str(c) for c in universe) if universe is not None else None,
        bool(obj.get("universe_complete", False)),
        bool(obj.get("q_factorial_asserted", False)),
    )


def fan_from_json(obj) -> Fan2D:
    rays = obj.get("rays") if isinstance(obj, dict) else obj
    if not isinstance(rays, list):
        raise _bad("a fan is a list of integer pairs (or {\"rays\": [...]})")
    return Fan2D(tuple((int(x), int(y)) for x, y in rays))


def fan_to_json(fan: Fan2D) -> dict:
    return {"rays": [list(v) for v in fan.rays]}


def verdict_to_json(v: Verdict) -> dict:
    out = {"value": "undecided" if v.value is None else v.value, "reason": v.reason}
    if v.witness is not None:
        out["witness"] = v.witness
    return out


def verdict_from_json(obj) -> Verdict:
    val = obj["value"]
    return Verdict(None if val == "undecided" else bool(val), obj.get("reason", ""),
                   obj.get("witness"))


def point_to_json(p: PointCertificate) -> dict:
    return {"component": list(p.component), "fundamental_cycle": divisor_to_json(p.cycle),
            "arithmetic_genus": p.arithmetic_genus, "rational": p.rational}


def report_to_json(r: ClassificationReport) -> dict:
    return {
        "klt": verdict_to_json(r.klt),
        "lc": verdict_to_json(r.lc),
        "mrlc": verdict_to_json(r.mrlc),
        "gmrlc": verdict_to_json(r.gmrlc),
        "q_factorial": verdict_to_json(r.q_factorial),
        "delta_Y": divisor_to_json(r.delta_Y),
        "delta_min_res": divisor_to_json(r.delta_min_res),
        "points": [point_to_json(p) for p in r.points],
        "notes": list(r.notes),
    }


def report_from_json(obj) -> ClassificationReport:
    return ClassificationReport(
        verdict_from_json(obj["klt"]),
        verdict_from_json(obj["lc"]),
        verdict_from_json(obj["mrlc"]),
        verdict_from_json(obj["gmrlc"]),
        verdict_from_json(obj["q_factorial"]),
        divisor_from_json(obj["delta_Y"]),
        divisor_from_json(obj["delta_min_res"]),
        tuple(PointCertificate(tuple(p["component"]), divisor_from_json(p["fundamental_cycle"]),
                               p["arithmetic_genus"]) for p in obj["points"]),
        tuple(obj["notes"]),
    )


def ray_to_json(r: RayCandidate) -> dict:
    return {"curve": r.curve, "kdelta_deg": format_rational(r.kdelta_deg),
            "self_int_X": format_rational(r.self_int_X), "kind": r.kind,
            "curves": list(r.curves)}


def _semiample_to_json(s):
    if isinstance(s, SemiampleWitness):
        return {"vertices": [[format_rational(x), format_rational(y)] for x, y in s.vertices],
                "image_dimension": s.image_dimension, "lattice_multiple": s.lattice_multiple}
    return s


def outcome_to_json(o) -> dict:
    if isinstance(o, GoodMinimalModel):
        return {"kind": o.kind,
                "nef_certificate": {c: format_rational(v) for c, v in o.nef_certificate.items()},
                "semiample": _semiample_to_json(o.semiample)}
    if isinstance(o, MoriFiberSpace):
        return {"kind": o.kind, "ray": ray_to_json(o.ray), "base_dimension": o.base_dimension,
                "relative_picard_rank": o.relative_picard_rank, "certificate": o.certificate}
    raise TypeError(f"unknown outcome {o!r}")


def step_to_json(i: int, s: MMPStep) -> dict:
    return {
        "step": i,
        "ray": ray_to_json(s.ray),
        "contracted_before": sorted(s.before.contracted),
        "contracted_after": sorted(s.after.contracted),
        "delta": divisor_to_json(s.delta),
        "classification": report_to_json(s.report),
        "extremal_bound_ok": s.bound_ok,
    }


def trace_to_json(t: MMPTrace) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "initial_model": model_to_json(t.initial),
        "initial_delta": divisor_to_json(t.initial_delta),
        "initial_classification": report_to_json(t.initial_report),
        "initial_picard_rank": t.initial_rank,
        "birational_steps": t.birational_steps,
        "steps": [step_to_json(i, s) for i, s in enumerate(t.steps, start=1)],
        "outcome": outcome_to_json(t.outcome),
        "final_model": model_to_json(t.final_model),
        "final_delta": divisor_to_json(t.final_delta),
        "universe_complete": t.universe_complete,
        "qualifier": None if t.universe_complete else "relative to the declared curve universe",
        "warnings": [] if t.universe_complete else ["UniverseIncomplete"],
        "violations": list(t.violations),
    }


def model_to_dot(model: SingularModel, name: str = "dual_graph") -> str:
    """Dual graph: a node per curve labelled (C^2, g), an edge per unit of intersection."""
    lines = [f"graph {name} {{"]
    for c in model.config.curves:
        shape = "box" if c.id in model.contracted else "ellipse"
        lines.append(f'  "{c.id}" [label="{c.id}\\nC^2={c.self_int} g={c.genus}", shape={shape}];')
    for (a, b), n in model.config.intersections.items():
        for _ in range(n):
            lines.append(f'  "{a}" -- "{b}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
