"""Regenerate the JSON sample inputs in fixtures/ from logsurf.fixtures.

genus2_cone.json is hand-written (a non-GMRLC input for the CLI refusal
path) and is left alone.
"""

import argparse
import json
from pathlib import Path

from logsurf import fixtures, schema

MODELS = {
    "plane_three_lines.json": lambda: fixtures.plane_three_concurrent_lines()[0],
    "elliptic_cone.json": lambda: fixtures.elliptic_cone()[0],
    "a1.json": lambda: fixtures.toric_a1_cartier_boundary()[0],
    "a2_chain.json": lambda: fixtures.a2_chain()[0],
    "empty-boundary-smooth.json": lambda: fixtures.smooth_plane()[0],
}
FANS = {"plane": fixtures.PLANE, "f0": fixtures.F0, "f1": fixtures.F1, "p112": fixtures.A1_FAN}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default=Path(__file__).resolve().parent.parent / "fixtures", type=Path)
    args = ap.parse_args()
    args.out.mkdir(exist_ok=True)
    for name, build in MODELS.items():
        text = json.dumps(schema.model_to_json(build()), indent=1) + "\n"
        (args.out / name).write_text(text, encoding="utf-8")
    for name, fan in FANS.items():
        (args.out / f"{name}_fan.json").write_text(json.dumps([list(v) for v in fan.rays]) + "\n")
    print(f"wrote {len(MODELS) + len(FANS)} files to {args.out}")


if __name__ == "__main__":
    main()
