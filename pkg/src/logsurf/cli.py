"""Command-line front end.

Exit codes: 0 success (JSON on stdout), 2 invalid input (JSON error with a
violation list), 3 refusal (e.g. running the MMP on a pair that is not
GMRLC, or asking for a multiplier ideal without a log resolution).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import schema
from .discrepancy import (
    ClassifyOptions,
    classify,
    fundamental_cycle,
    log_pullback,
    minimal_resolution,
    multiplier_floor,
)
from .errors import (
    BoundaryOutOfRange,
    ContractedSupport,
    EmptyUniverse,
    InvalidModel,
    LogSurfError,
    NotComplete,
    NotConnected,
    NotContractible,
    NotGMRLC,
    NotLogResolution,
    NotPrimitive,
)
from .mmp import run_mmp
from .surface_model import Divisor, connected_components
from .toric import config_from_fan

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_REFUSED = 3

VALIDATION_ERRORS = (InvalidModel, NotContractible, BoundaryOutOfRange, ContractedSupport,
                     NotComplete, NotPrimitive, NotConnected, EmptyUniverse, KeyError, ValueError)
REFUSALS = (NotGMRLC, NotLogResolution)


def _emit(obj, stream=None):
    stream = stream or sys.stdout
    stream.write(json.dumps(obj, ensure_ascii=False, sort_keys=False) + "\n")


def _read_json(path: str):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InvalidModel(f"{path}: not valid JSON ({exc})",
                           [{"rule": "json", "detail": str(exc)}]) from exc


def _delta(arg) -> Divisor:
    if not arg:
        return Divisor()
    text = Path(arg[1:]).read_text(encoding="utf-8") if arg.startswith("@") else arg
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidModel(f"--delta is not valid JSON ({exc})",
                           [{"rule": "json", "detail": str(exc)}]) from exc
    return schema.divisor_from_json(obj)


def _load(args):
    """Model and default boundary from --model or --fan."""
    if getattr(args, "fan", None):
        toric = config_from_fan(schema.fan_from_json(_read_json(args.fan)))
        default = toric.boundary if getattr(args, "toric_boundary", False) else Divisor()
        return toric.model, default
    if not getattr(args, "model", None):
        raise InvalidModel("one of --model or --fan is required", [{"rule": "usage"}])
    return schema.model_from_json(_read_json(args.model)), Divisor()


def _check_ids(model, delta):
    missing = sorted(c for c in delta.support if c not in model.config)
    if missing:
        raise InvalidModel("boundary refers to unknown curves",
                           [{"rule": "unknown_curve", "curve": c} for c in missing])


def _options(args) -> ClassifyOptions:
    if getattr(args, "max_subset", None) is not None:
        return ClassifyOptions(max_subset=args.max_subset)
    return ClassifyOptions()


def cmd_classify(args):
    model, default = _load(args)
    delta = _delta(args.delta) if args.delta else default
    _check_ids(model, delta)
    return schema.report_to_json(classify(model, delta, _options(args)))


def cmd_pullback(args):
    model, default = _load(args)
    delta = _delta(args.delta) if args.delta else default
    _check_ids(model, delta)
    model.check()
    dy = log_pullback(model, delta, allow_out_of_range=args.allow_out_of_range)
    cfg = model.config
    residuals = {
        e: schema.format_rational(
            cfg.curve(e).k_dot + sum((x * cfg.dot(a, e) for a, x in dy.items()), 0))
        for e in sorted(model.contracted)
    }
    return {"delta_Y": schema.divisor_to_json(dy), "exceptional_residuals": residuals}


def cmd_minres(args):
    model, _ = _load(args)
    model.check()
    return schema.model_to_json(minimal_resolution(model))


def cmd_fundcycle(args):
    model, _ = _load(args)
    model.check()
    if args.component:
        comps = [frozenset(args.component.split(","))]
    else:
        comps = connected_components(model.config, model.contracted)
    out = []
    for comp in comps:
        z, pa = fundamental_cycle(model, comp)
        out.append({"component": sorted(comp), "fundamental_cycle": schema.divisor_to_json(z),
                    "arithmetic_genus": pa, "rational": pa == 0})
    return {"points": out}


def cmd_multiplier(args):
    model, default = _load(args)
    delta = _delta(args.delta) if args.delta else default
    _check_ids(model, delta)
    model.check()
    fl, klt = multiplier_floor(model, delta)
    return {"floor_delta_Y": schema.divisor_to_json(fl), "klt": klt,
            "note": "the multiplier ideal is f_* O_Y(-floor(Delta_Y)); trivial exactly when klt"}


def cmd_mmp(args):
    model, default = _load(args)
    delta = _delta(args.delta) if args.delta else default
    _check_ids(model, delta)
    universe = args.universe.split(",") if args.universe else None
    dot_dir = Path(args.dot) if args.dot else None
    if dot_dir:
        dot_dir.mkdir(parents=True, exist_ok=True)
    count = [0]

    def on_step(step):
        count[0] += 1
        i = count[0]
        if args.trace:
            _emit(schema.step_to_json(i, step))
            sys.stdout.flush()
        if dot_dir:
            (dot_dir / f"step{i:02d}_before.dot").write_text(schema.model_to_dot(step.before))
            (dot_dir / f"step{i:02d}_after.dot").write_text(schema.model_to_dot(step.after))

    trace = run_mmp(model, delta, universe, args.vertical_only, _options(args), on_step)
    return schema.trace_to_json(trace)


def cmd_toric_build(args):
    toric = config_from_fan(schema.fan_from_json(_read_json(args.fan)))
    if args.dot:
        Path(args.dot).write_text(schema.model_to_dot(toric.model))
    return {"model": schema.model_to_json(toric.model),
            "universe": list(toric.universe),
            "canonical": schema.divisor_to_json(toric.canonical),
            "boundary": schema.divisor_to_json(toric.boundary)}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="logsurf", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, boundary=True, fan=True):
        sp.add_argument("--model", help="surface model JSON")
        if fan:
            sp.add_argument("--fan", help="fan JSON (list of integer pairs)")
            sp.add_argument("--toric-boundary", action="store_true",
                            help="with --fan and no --delta, use the full toric boundary")
        if boundary:
            sp.add_argument("--delta", help='boundary as JSON {"id": "p/q"} or @file')
        sp.add_argument("--max-subset", type=int, default=None,
                        help="cap for the GMRLC witness search (env MMP_SURFACE_MAX_SUBSET)")
        sp.add_argument("--dot", help="write DOT dual graph(s) here")

    sp = sub.add_parser("classify", help="klt / lc / MRLC / GMRLC report")
    common(sp)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("pullback", help="log pullback Delta_Y")
    common(sp)
    sp.add_argument("--allow-out-of-range", action="store_true",
                    help="compute even if boundary coefficients leave (0, 1]")
    sp.set_defaults(func=cmd_pullback)

    sp = sub.add_parser("minres", help="minimal resolution of the model")
    common(sp, boundary=False)
    sp.set_defaults(func=cmd_minres)

    sp = sub.add_parser("fundcycle", help="fundamental cycles and rationality")
    common(sp, boundary=False)
    sp.add_argument("--component", help="comma-separated curve ids (default: every point)")
    sp.set_defaults(func=cmd_fundcycle)

    sp = sub.add_parser("multiplier", help="round-down of Delta_Y on a log resolution")
    common(sp)
    sp.set_defaults(func=cmd_multiplier)

    sp = sub.add_parser("mmp", help="run the minimal model program")
    common(sp)
    sp.add_argument("--universe", help="comma-separated curve ids spanning the cone")
    sp.add_argument("--vertical-only", action="store_true",
                    help="only curves flagged vertical generate the relative cone")
    sp.add_argument("--trace", action="store_true", help="stream one JSON line per step")
    sp.set_defaults(func=cmd_mmp)

    sp = sub.add_parser("toric-build", help="build a surface model from a fan")
    sp.add_argument("--fan", required=True)
    sp.add_argument("--dot", help="write the DOT dual graph to this file")
    sp.set_defaults(func=cmd_toric_build)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        result = args.func(args)
    except REFUSALS as exc:
        _emit({"error": type(exc).__name__, "message": str(exc)})
        return EXIT_REFUSED
    except VALIDATION_ERRORS as exc:
        violations = getattr(exc, "violations", None) or [{"rule": type(exc).__name__,
                                                           "detail": str(exc)}]
        _emit({"error": type(exc).__name__, "message": str(exc), "violations": violations})
        return EXIT_INVALID
    except LogSurfError as exc:
        _emit({"error": type(exc).__name__, "message": str(exc)})
        return EXIT_INVALID
    if args.command != "mmp" and getattr(args, "dot", None) and args.command != "toric-build":
        model, _ = _load(args)
        Path(args.dot).write_text(schema.model_to_dot(model))
    _emit(result)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
