"""Complete toric surfaces from 2D fans.

Singular cones are resolved by Hirzebruch-Jung subdivision; the resulting
smooth fan gives the curve configuration, with the inserted curves marked as
contracted.  Torus-invariant curves generate the Mori cone of a toric
surface, so models built here carry a certified-complete curve universe.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import NotComplete, NotPrimitive
from .surface_model import CurveConfig, CurveRecord, Divisor, SingularModel, intersect_on_X

Vec = tuple[int, int]


def det(u: Vec, v: Vec) -> int:
    return u[0] * v[1] - u[1] * v[0]


def _half(v: Vec) -> int:
    # 0 for angles in [0, pi), 1 for [pi, 2pi)
    return 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1


def _angle_lt(u: Vec, v: Vec) -> bool:
    hu, hv = _half(u), _half(v)
    if hu != hv:
        return hu < hv
    return det(u, v) > 0


def sort_by_angle(rays: Sequence[Vec]) -> list[Vec]:
    def cmp(a, b):
        if _angle_lt(a, b):
            return -1
        if _angle_lt(b, a):
            return 1
        return 0

    return sorted(rays, key=functools.cmp_to_key(cmp))


@dataclass(frozen=True)
class Fan2D:
    """Complete fan in the plane: primitive rays in counterclockwise order."""

    rays: tuple[Vec, ...]

    def __post_init__(self):
        rays = tuple((int(x), int(y)) for x, y in self.rays)
        object.__setattr__(self, "rays", rays)
        for v in rays:
            if v == (0, 0) or math.gcd(*v) != 1:
                raise NotPrimitive(f"ray {v} is not a primitive lattice vector")
        n = len(rays)
        if n < 3:
            raise NotComplete("a complete fan needs at least three rays")
        for i in range(n):
            if det(rays[i], rays[(i + 1) % n]) <= 0:
                raise NotComplete(
                    f"rays {rays[i]} and {rays[(i + 1) % n]} are not in strictly "
                    "counterclockwise position"
                )
        wraps = sum(1 for i in range(n) if not _angle_lt(rays[i], rays[(i + 1) % n]))
        if wraps != 1:
            raise NotComplete(f"rays wind {wraps} times around the origin")

    @classmethod
    def from_unordered(cls, rays: Sequence[Vec]) -> "Fan2D":
        return cls(tuple(sort_by_angle([tuple(v) for v in rays])))

    def __len__(self):
        return len(self.rays)

    def cones(self) -> list[tuple[Vec, Vec]]:
        n = len(self.rays)
        return [(self.rays[i], self.rays[(i + 1) % n]) for i in range(n)]

    def is_smooth(self) -> bool:
        return all(det(u, v) == 1 for u, v in self.cones())


def _unimodular_partner(u: Vec) -> Vec:
    """Some e with det(u, e) = 1."""
    a, b = u
    # extended Euclid on (a, b): x*a + y*b = 1, then det(u, (-y, x)) = a*x + b*y
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    x, y = old_s, old_t
    if old_r < 0:
        x, y = -x, -y
    e = (-y, x)
    assert det(u, e) == 1
    return e


def hirzebruch_jung(u: Vec, w: Vec) -> list[Vec]:
    """Rays strictly inside cone(u, w) of its minimal smooth subdivision."""
    n = det(u, w)
    if n <= 0:
        raise NotComplete(f"cone({u}, {w}) is not strictly convex and counterclockwise")
    inserted = []
    a = u
    while det(a, w) > 1:
        e = _unimodular_partner(a)
        # p = e + t*a lies in the cone iff det(p, w) >= 0; the least such t is the next ray
        t = -(det(e, w) // det(a, w))
        p = (e[0] + t * a[0], e[1] + t * a[1])
        assert det(a, p) == 1 and det(p, w) >= 0
        inserted.append(p)
        a = p
    return inserted


def continued_fraction(u: Vec, w: Vec) -> list[int]:
    """Hirzebruch-Jung continued fraction [b_1, ..., b_r] of cone(u, w)."""
    chain = [u] + hirzebruch_jung(u, w) + [w]
    out = []
    for i in range(1, len(chain) - 1):
        s = (chain[i - 1][0] + chain[i + 1][0], chain[i - 1][1] + chain[i + 1][1])
        out.append(det(s, chain[i + 1]))
    return out


@dataclass(frozen=True)
class ToricSurface:
    model: SingularModel
    universe: tuple[str, ...]
    canonical: Divisor  # K_X = -sum of the torus-invariant curves of X
    boundary: Divisor
    fan: Fan2D


def smooth_self_intersection(prev: Vec, v: Vec, nxt: Vec) -> int:
    s = (prev[0] + nxt[0], prev[1] + nxt[1])
    if det(s, v) != 0:
        raise NotComplete("subdivision is not smooth")
    # prev + next = b * v with D^2 = -b
    b = det(s, nxt) // det(v, nxt)
    return -b


def config_from_fan(fan: Fan2D) -> ToricSurface:
    """Minimal resolution of the toric surface of ``fan`` as a SingularModel."""
    ids: list[str] = []
    vecs: list[Vec] = []
    original: list[str] = []
    n = len(fan.rays)
    for i, (u, w) in enumerate(fan.cones()):
        ids.append(f"D{i}")
        vecs.append(u)
        original.append(f"D{i}")
        for j, p in enumerate(hirzebruch_jung(u, w)):
            ids.append(f"E{i}_{j}")
            vecs.append(p)
    m = len(vecs)
    curves = []
    for k in range(m):
        d2 = smooth_self_intersection(vecs[k - 1], vecs[k], vecs[(k + 1) % m])
        curves.append(CurveRecord(ids[k], d2, 0, -2 - d2, True, vecs[k]))
    table = {}
    for k in range(m):
        table[(ids[k], ids[(k + 1) % m])] = 1
    cfg = CurveConfig(tuple(curves), table, snc_attested=True)
    contracted = frozenset(ids) - frozenset(original)
    universe = tuple(original)
    model = SingularModel(cfg, contracted, universe, universe_complete=True)
    boundary = Divisor({c: 1 for c in original})
    return ToricSurface(model, universe, -boundary, boundary, fan)


def current_fan(model: SingularModel) -> Optional[Fan2D]:
    """Fan of X read off the ray labels of its non-contracted curves, if toric."""
    vecs = []
    for c in model.surviving:
        ray = model.config.curve(c).ray
        if ray is None:
            continue
        vecs.append(ray)
    if len(vecs) < 3 or any(model.config.curve(c).ray is None for c in model.contracted):
        return None
    try:
        return Fan2D.from_unordered(vecs)
    except (NotComplete, NotPrimitive):
        return None


def toric_id_by_ray(model: SingularModel) -> dict[Vec, str]:
    return {model.config.curve(c).ray: c for c in model.config.ids
            if model.config.curve(c).ray is not None}


@dataclass(frozen=True)
class SemiampleWitness:
    vertices: tuple[tuple[Fraction, Fraction], ...]
    image_dimension: int
    lattice_multiple: int  # scaling that makes the polytope a lattice polytope


@dataclass(frozen=True)
class NotNef:
    curve: str
    degree: Fraction


def _affine_dimension(points) -> int:
    if not points:
        return -1
    p0 = points[0]
    diffs = [(p[0] - p0[0], p[1] - p0[1]) for p in points[1:]]
    nonzero = [d for d in diffs if d != (0, 0)]
    if not nonzero:
        return 0
    d0 = nonzero[0]
    if all(d0[0] * d[1] - d0[1] * d[0] == 0 for d in nonzero):
        return 1
    return 2


def nef_semiample_witness(fan: Fan2D, model: SingularModel, d: Divisor):
    """Semi-ample certificate for a torus-invariant divisor ``d`` on X.

    Returns :class:`NotNef` when some torus-invariant curve has negative
    degree.  Otherwise returns the polytope {m : <m, v_i> >= -a_i} through its
    vertices (one per maximal cone), whose dimension is the dimension of the
    image of the associated morphism.
    """
    by_ray = toric_id_by_ray(model)
    ids = []
    for v in fan.rays:
        if v not in by_ray:
            raise ValueError(f"ray {v} has no curve in the model")
        ids.append(by_ray[v])
    outside = sorted(d.support - set(ids))
    if outside:
        raise ValueError(f"divisor must be torus-invariant; extra curves {outside}")
    for c in ids:
        deg = intersect_on_X(model, d, Divisor({c: 1}))
        if deg < 0:
            return NotNef(c, deg)
    a = [d[c] for c in ids]
    verts = []
    n = len(ids)
    for i in range(n):
        u, w = fan.rays[i], fan.rays[(i + 1) % n]
        # <m,u> = -a_i, <m,w> = -a_{i+1}
        dd = det(u, w)
        bu, bw = -a[i], -a[(i + 1) % n]
        mx = Fraction(bu * w[1] - bw * u[1], dd)
        my = Fraction(u[0] * bw - w[0] * bu, dd)
        verts.append((mx, my))
    for mx, my in verts:
        for v, ai in zip(fan.rays, a):
            assert mx * v[0] + my * v[1] >= -ai, "vertex outside the polytope of a nef divisor"
    uniq = sorted(set(verts))
    mult = 1
    for x, y in uniq:
        mult = math.lcm(mult, x.denominator, y.denominator)
    return SemiampleWitness(tuple(uniq), _affine_dimension(uniq), mult)
