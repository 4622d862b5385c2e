"""Classify every built-in fixture and print a verdict table (or JSON with --json)."""

import argparse
import json

from logsurf import schema
from logsurf.discrepancy import classify
from logsurf.exactlin import format_rational
from logsurf.fixtures import gmrlc_fixtures


def cell(v):
    return "?" if v.value is None else ("yes" if v.value else "no")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--json", action="store_true", help="emit full reports as JSON lines")
    args = ap.parse_args()

    rows = []
    for name, model, delta in gmrlc_fixtures():
        r = classify(model, delta)
        if args.json:
            print(json.dumps({"fixture": name, "report": schema.report_to_json(r)}))
            continue
        top = max(r.delta_Y.restrict(model.contracted).coeffs.values(), default=0)
        rows.append((name, cell(r.klt), cell(r.lc), cell(r.mrlc), cell(r.gmrlc),
                     cell(r.q_factorial), str(format_rational(top)),
                     ",".join(r.gmrlc.witness or []) if r.gmrlc.value else ""))
    if args.json:
        return
    head = ("fixture", "klt", "lc", "mrlc", "gmrlc", "Q-fact", "max c(E)", "witness T")
    widths = [max(len(str(x)) for x in col) for col in zip(head, *rows)]
    for row in (head, *rows):
        print("  ".join(str(x).ljust(w) for x, w in zip(row, widths)))


if __name__ == "__main__":
    main()
