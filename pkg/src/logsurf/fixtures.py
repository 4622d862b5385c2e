"""Hand-built surfaces used by the test suite, the scripts and the CLI samples.

Each builder returns ``(model, delta)``.
"""

from __future__ import annotations

from dataclasses import replace

from .surface_model import CurveConfig, CurveRecord, Divisor, Point, SingularModel
from .toric import Fan2D, config_from_fan

PLANE = Fan2D(((1, 0), (0, 1), (-1, -1)))
F0 = Fan2D(((1, 0), (0, 1), (-1, 0), (0, -1)))
F1 = Fan2D(((1, 0), (0, 1), (-1, 1), (0, -1)))
A1_FAN = Fan2D(((1, 0), (0, 1), (-1, -2)))  # P(1,1,2)


def hirzebruch_fan(a: int) -> Fan2D:
    return Fan2D(((1, 0), (0, 1), (-1, a), (0, -1)))


def plane_three_concurrent_lines():
    """P^2 with three lines through one point, presented on the blow-up at that point.

    Y is the blow-up; L1, L2, L3 are the strict transforms (fibres of the
    ruling, self-intersection 0) meeting the exceptional curve E once each.
    """
    curves = [CurveRecord("E", -1, 0, -1)] + [CurveRecord(f"L{i}", 0, 0, -2) for i in (1, 2, 3)]
    inter = {("E", f"L{i}"): 1 for i in (1, 2, 3)}
    points = [Point(f"p{i}", ("E", f"L{i}")) for i in (1, 2, 3)]
    cfg = CurveConfig(tuple(curves), inter, snc_attested=True, points=tuple(points))
    model = SingularModel(cfg, frozenset({"E"}))
    return model, Divisor({"L1": 1, "L2": 1, "L3": 1})


def elliptic_cone():
    """Projective cone over an elliptic curve, resolved by the ruled surface over it.

    E is the negative section (E^2 = -1, genus 1), Einf the section at
    infinity and F a fibre.
    """
    curves = [
        CurveRecord("E", -1, 1, 1),
        CurveRecord("Einf", 1, 1, -1),
        CurveRecord("F", 0, 0, -2),
    ]
    inter = {("E", "F"): 1, ("Einf", "F"): 1}
    cfg = CurveConfig(tuple(curves), inter, snc_attested=True)
    return SingularModel(cfg, frozenset({"E"}), universe=("Einf", "F")), Divisor()


def toric_a1_cartier_boundary():
    """P(1,1,2) with two general members of |O(4)| through the A1 point.

    Y is the minimal resolution F_2: E is the (-2)-curve, T0..T2 the other
    toric curves (T0, T2 fibres, T1 the positive section), and D1, D2 the
    strict transforms of the two boundary curves.  Each D_i is linearly
    equivalent to E + 4F on F_2, so D_i.E = 2, D_i^2 = 6, K.D_i = -8 and
    D1.D2 = 6.
    """
    toric = config_from_fan(A1_FAN).model
    (old,) = sorted(toric.contracted)

    def ren(c):
        return "E" if c == old else "T" + c[1:]

    base = toric.config
    curves = [replace(c, id=ren(c.id)) for c in base.curves]
    curves += [CurveRecord("D1", 6, 0, -8), CurveRecord("D2", 6, 0, -8)]
    inter = {(ren(a), ren(b)): n for (a, b), n in base.intersections.items()}
    for c in ("D1", "D2"):
        inter[(c, "E")] = 2
        inter[(c, "T1")] = 4  # the positive section E + 2F
        inter[(c, "T0")] = inter[(c, "T2")] = 1
    inter[("D1", "D2")] = 6
    cfg = CurveConfig(tuple(curves), inter, snc_attested=True)
    universe = tuple(ren(c) for c in toric.universe)
    model = SingularModel(cfg, frozenset({"E"}), universe, universe_complete=True)
    return model, Divisor({"D1": 1, "D2": 1})


def smooth_point_blowup():
    """A (-1)-curve over a smooth point, plus a line through the point."""
    curves = [CurveRecord("E", -1, 0, -1), CurveRecord("L", 0, 0, -2)]
    cfg = CurveConfig(tuple(curves), {("E", "L"): 1}, snc_attested=True)
    return SingularModel(cfg, frozenset({"E"})), Divisor()


def a2_chain():
    """Two (-2)-curves meeting once, and a curve L meeting the first."""
    curves = [CurveRecord("E1", -2, 0, 0), CurveRecord("E2", -2, 0, 0), CurveRecord("L", -1, 0, -1)]
    cfg = CurveConfig(tuple(curves), {("E1", "E2"): 1, ("E1", "L"): 1}, snc_attested=True)
    return SingularModel(cfg, frozenset({"E1", "E2"})), Divisor({"L": 1})


def smooth_plane():
    return config_from_fan(PLANE).model, Divisor()


def gmrlc_fixtures():
    """Every GMRLC fixture as (name, model, delta)."""
    out = [
        ("plane_three_lines",) + plane_three_concurrent_lines(),
        ("elliptic_cone",) + elliptic_cone(),
        ("toric_a1_cartier",) + toric_a1_cartier_boundary(),
        ("smooth_point_blowup",) + smooth_point_blowup(),
        ("a2_chain",) + a2_chain(),
    ]
    for name, fan in (("plane", PLANE), ("F0", F0), ("F1", F1), ("P112", A1_FAN)):
        t = config_from_fan(fan)
        out.append((f"{name}_boundary", t.model, t.boundary))
    return out
