"""Combinatorial surfaces.

A smooth projective surface ``Y`` is described by a finite arena of curves
(:class:`CurveConfig`): self-intersections, arithmetic genera, canonical
degrees and the pairwise intersection numbers.  A normal surface ``X`` is
never stored on its own; it is the pair (``Y``, set of contracted curves),
see :class:`SingularModel`.  Intersection theory on ``X`` is Mumford's
rational pairing, computed by pulling back to ``Y``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field, replace
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping, Optional

from .errors import ContractedSupport, InvalidModel, NotContractible, NotMinusOneCurve
from .exactlin import QMatrix, as_rational, is_negative_definite, solve_linear


def _pair(a: str, b: str) -> tuple[str, str]:
    return (a, b) if a <= b else (b, a)


@dataclass(frozen=True)
class CurveRecord:
    id: str
    self_int: int
    genus: int
    k_dot: int
    vertical: bool = True
    ray: Optional[tuple[int, int]] = None  # set on torus-invariant curves


@dataclass(frozen=True)
class Point:
    id: str
    curves: tuple[str, ...]


class Divisor:
    """Formal Q-linear combination of curve ids. Zero coefficients are dropped."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Mapping[str, object] | Iterable[tuple[str, object]] = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        acc: dict[str, Fraction] = {}
        for k, v in items:
            acc[k] = acc.get(k, Fraction(0)) + as_rational(v)
        self._coeffs = MappingProxyType({k: acc[k] for k in sorted(acc) if acc[k] != 0})

    @classmethod
    def of(cls, **coeffs) -> "Divisor":
        return cls(coeffs)

    @property
    def coeffs(self) -> Mapping[str, Fraction]:
        return self._coeffs

    def __getitem__(self, cid: str) -> Fraction:
        return self._coeffs.get(cid, Fraction(0))

    coeff = __getitem__

    def items(self):
        return self._coeffs.items()

    @property
    def support(self) -> frozenset[str]:
        return frozenset(self._coeffs)

    def __bool__(self):
        return bool(self._coeffs)

    def __eq__(self, other):
        if isinstance(other, Divisor):
            return dict(self._coeffs) == dict(other._coeffs)
        if other == 0:
            return not self._coeffs
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self._coeffs.items()))

    def __add__(self, other: "Divisor") -> "Divisor":
        return Divisor(list(self.items()) + list(other.items()))

    def __neg__(self) -> "Divisor":
        return Divisor({k: -v for k, v in self.items()})

    def __sub__(self, other: "Divisor") -> "Divisor":
        return self + (-other)

    def __mul__(self, scalar) -> "Divisor":
        s = as_rational(scalar)
        return Divisor({k: s * v for k, v in self.items()})

    __rmul__ = __mul__

    def __le__(self, other: "Divisor") -> bool:
        keys = self.support | other.support
        return all(self[k] <= other[k] for k in keys)

    def __ge__(self, other: "Divisor") -> bool:
        return other <= self

    def is_effective(self) -> bool:
        return all(v >= 0 for v in self._coeffs.values())

    def restrict(self, ids: Iterable[str]) -> "Divisor":
        keep = set(ids)
        return Divisor({k: v for k, v in self.items() if k in keep})

    def drop(self, ids: Iterable[str]) -> "Divisor":
        gone = set(ids)
        return Divisor({k: v for k, v in self.items() if k not in gone})

    def __repr__(self):
        if not self._coeffs:
            return "Divisor(0)"
        return "Divisor(" + " + ".join(f"{v}*{k}" for k, v in self.items()) + ")"


@dataclass(frozen=True)
class CurveConfig:
    """Curves on a smooth projective surface and their intersection numbers."""

    curves: tuple[CurveRecord, ...]
    intersections: Mapping[tuple[str, str], int] = field(default_factory=dict)
    snc_attested: bool = False
    points: Optional[tuple[Point, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "curves", tuple(self.curves))
        table = {_pair(a, b): int(n) for (a, b), n in dict(self.intersections).items() if n != 0}
        object.__setattr__(self, "intersections", MappingProxyType(dict(sorted(table.items()))))
        if self.points is not None:
            object.__setattr__(self, "points", tuple(self.points))
        object.__setattr__(self, "_index", {c.id: c for c in self.curves})

    @classmethod
    def build(cls, curves, intersections=(), snc_attested=False, points=None) -> "CurveConfig":
        """Friendly constructor.

        ``curves`` may hold CurveRecords or ``(id, self_int, genus, k_dot)``
        tuples; ``intersections`` may be a mapping ``{(a, b): n}`` or a list of
        ``(a, b, n)`` triples, in either order of ``a`` and ``b``.
        """
        recs = tuple(c if isinstance(c, CurveRecord) else CurveRecord(*c) for c in curves)
        items = intersections.items() if isinstance(intersections, Mapping) else (
            ((a, b), n) for a, b, n in intersections
        )
        table: dict[tuple[str, str], int] = {}
        for (a, b), n in items:
            key = _pair(a, b)
            if key in table and table[key] != n:
                raise InvalidModel(
                    f"conflicting intersection numbers for {key}",
                    [{"rule": "symmetry", "pair": list(key), "values": [table[key], n]}],
                )
            table[key] = n
        pts = None
        if points is not None:
            pts = tuple(p if isinstance(p, Point) else Point(p[0], tuple(p[1])) for p in points)
        return cls(recs, table, snc_attested, pts)

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(c.id for c in self.curves)

    def __contains__(self, cid: str) -> bool:
        return cid in self._index

    def curve(self, cid: str) -> CurveRecord:
        try:
            return self._index[cid]
        except KeyError:
            raise KeyError(f"unknown curve id {cid!r}") from None

    def dot(self, a: str, b: str) -> int:
        if a == b:
            return self.curve(a).self_int
        return self.intersections.get(_pair(a, b), 0)

    def intersect(self, d1: Divisor, d2: Divisor) -> Fraction:
        return sum(
            (x * y * self.dot(a, b) for a, x in d1.items() for b, y in d2.items()),
            Fraction(0),
        )

    def k_dot_of(self, d: Divisor) -> Fraction:
        return sum((x * self.curve(a).k_dot for a, x in d.items()), Fraction(0))

    def matrix(self, ids) -> QMatrix:
        ids = list(ids)
        return QMatrix.of([[self.dot(a, b) for b in ids] for a in ids])

    def neighbours(self, cid: str) -> dict[str, int]:
        out = {}
        for (a, b), n in self.intersections.items():
            if a == cid:
                out[b] = n
            elif b == cid:
                out[a] = n
        return out


def validate(config: CurveConfig) -> list[dict]:
    """Every broken invariant of ``config`` as a list of violation records."""
    out: list[dict] = []
    seen: set[str] = set()
    for c in config.curves:
        if c.id in seen:
            out.append({"rule": "duplicate_id", "curve": c.id})
        seen.add(c.id)
        if c.genus < 0:
            out.append({"rule": "genus_nonnegative", "curve": c.id, "genus": c.genus})
        if 2 * c.genus - 2 != c.self_int + c.k_dot:
            out.append({
                "rule": "adjunction",
                "curve": c.id,
                "detail": f"2g-2 = {2 * c.genus - 2} but C^2 + K.C = {c.self_int + c.k_dot}",
            })
    for (a, b), n in config.intersections.items():
        if a == b:
            out.append({"rule": "self_pair_in_table", "pair": [a, b]})
            continue
        for x in (a, b):
            if x not in seen:
                out.append({"rule": "unknown_curve", "pair": [a, b], "curve": x})
        if n < 0:
            out.append({"rule": "nonnegative_intersection", "pair": [a, b], "value": n})
    if config.snc_attested and config.points is not None:
        shared: dict[tuple[str, str], int] = {}
        for p in config.points:
            if len(p.curves) != 2 or p.curves[0] == p.curves[1]:
                out.append({"rule": "snc_point", "point": p.id, "curves": list(p.curves),
                            "detail": "an SNC point lies on exactly two distinct curves"})
                continue
            for x in p.curves:
                if x not in seen:
                    out.append({"rule": "unknown_curve", "point": p.id, "curve": x})
            key = _pair(*p.curves)
            shared[key] = shared.get(key, 0) + 1
        for key in sorted(set(shared) | set(config.intersections)):
            if key[0] == key[1]:
                continue
            want = config.intersections.get(key, 0)
            got = shared.get(key, 0)
            if want != got:
                out.append({"rule": "snc_transversal", "pair": list(key),
                            "detail": f"intersection number {want} but {got} shared points"})
    return out


def connected_components(config: CurveConfig, ids: Iterable[str]) -> list[frozenset[str]]:
    """Connected components of the dual graph restricted to ``ids`` (sorted, deterministic)."""
    todo = sorted(set(ids))
    left = set(todo)
    comps = []
    for start in todo:
        if start not in left:
            continue
        comp = {start}
        left.discard(start)
        queue = deque([start])
        while queue:
            a = queue.popleft()
            for b in sorted(left):
                if config.dot(a, b) > 0:
                    left.discard(b)
                    comp.add(b)
                    queue.append(b)
        comps.append(frozenset(comp))
    return comps


@dataclass(frozen=True)
class SingularModel:
    """A normal surface X presented as (Y, contracted curves).

    ``universe`` lists the curves of X used for cone computations (default:
    every curve that is not contracted).  ``universe_complete`` records that
    those curves are known to generate the Mori cone, as for toric surfaces.
    """

    config: CurveConfig
    contracted: frozenset[str] = frozenset()
    universe: Optional[tuple[str, ...]] = None
    universe_complete: bool = False
    q_factorial_asserted: bool = False

    def __post_init__(self):
        object.__setattr__(self, "contracted", frozenset(self.contracted))
        if self.universe is not None:
            object.__setattr__(self, "universe", tuple(self.universe))

    @property
    def surviving(self) -> tuple[str, ...]:
        return tuple(c for c in self.config.ids if c not in self.contracted)

    @property
    def universe_ids(self) -> tuple[str, ...]:
        if self.universe is None:
            return self.surviving
        return tuple(c for c in self.universe if c not in self.contracted)

    def components(self) -> list[frozenset[str]]:
        return connected_components(self.config, self.contracted)

    def check(self) -> None:
        """Raise if the model data is inconsistent or the contraction is impossible."""
        violations = validate(self.config)
        for c in sorted(self.contracted):
            if c not in self.config:
                violations.append({"rule": "unknown_curve", "contracted": c})
        for c in self.universe or ():
            if c not in self.config:
                violations.append({"rule": "unknown_curve", "universe": c})
        if violations:
            raise InvalidModel("invalid surface model", violations)
        for comp in self.components():
            if not is_negative_definite(self.config.matrix(sorted(comp))):
                raise NotContractible(
                    f"intersection matrix of {sorted(comp)} is not negative definite"
                )

    def with_contracted(self, contracted) -> "SingularModel":
        return replace(self, contracted=frozenset(contracted))


def _solve_exceptional(model: SingularModel, rhs_of) -> dict[str, Fraction]:
    """Solve M c = rhs over the contracted curves, where rhs_of(E) gives the entry."""
    ids = sorted(model.contracted)
    if not ids:
        return {}
    M = model.config.matrix(ids)
    for comp in model.components():
        if not is_negative_definite(model.config.matrix(sorted(comp))):
            raise NotContractible(f"intersection matrix of {sorted(comp)} is not negative definite")
    sol = solve_linear(M, [rhs_of(e) for e in ids])
    return dict(zip(ids, sol))


def _check_off_contracted(model: SingularModel, d: Divisor) -> None:
    bad = sorted(d.support & model.contracted)
    if bad:
        raise ContractedSupport(f"divisor on X may not involve contracted curves {bad}")
    unknown = sorted(c for c in d.support if c not in model.config)
    if unknown:
        raise KeyError(f"unknown curve ids {unknown}")


def mumford_pullback(model: SingularModel, d: Divisor) -> Divisor:
    """Numerical pullback f^*D: strict transform plus the unique exceptional
    correction making it orthogonal to every contracted curve."""
    _check_off_contracted(model, d)
    cfg = model.config
    corr = _solve_exceptional(
        model, lambda e: -sum((x * cfg.dot(a, e) for a, x in d.items()), Fraction(0))
    )
    return d + Divisor(corr)


def pushforward(model: SingularModel, d_y: Divisor) -> Divisor:
    return d_y.drop(model.contracted)


def intersect_on_X(model: SingularModel, d1: Divisor, d2: Divisor) -> Fraction:
    """Mumford's rational intersection pairing on X."""
    if not d1 or not d2:
        _check_off_contracted(model, d1)
        _check_off_contracted(model, d2)
        return Fraction(0)
    p1 = mumford_pullback(model, d1)
    # f^*D1 is orthogonal to exceptional curves, so pulling back D2 is unnecessary
    _check_off_contracted(model, d2)
    return model.config.intersect(p1, d2)


def is_minus_one_curve(rec: CurveRecord) -> bool:
    return rec.self_int == -1 and rec.genus == 0


def blow_down(config: CurveConfig, e: str) -> CurveConfig:
    """Contract the (-1)-curve ``e`` to a smooth point.

    Intersection numbers of the remaining curves gain ``(C.e)(D.e)``; a curve
    meeting ``e`` m times acquires a singular point and m(m-1)/2 more
    arithmetic genus.  An SNC
    attestation survives only if the image point is an ordinary node or lies
    on at most one curve meeting ``e`` transversally.
    """
    rec = config.curve(e)
    if not is_minus_one_curve(rec) or rec.k_dot != -1:
        raise NotMinusOneCurve(
            f"{e} has self_int={rec.self_int}, genus={rec.genus}, k_dot={rec.k_dot}"
        )
    meet = config.neighbours(e)
    curves = []
    for c in config.curves:
        if c.id == e:
            continue
        m = meet.get(c.id, 0)
        # meeting e m times leaves a singular point of the image, so p_a grows
        curves.append(replace(c, self_int=c.self_int + m * m, k_dot=c.k_dot - m,
                              genus=c.genus + m * (m - 1) // 2))
    table = {}
    for (a, b), n in config.intersections.items():
        if e in (a, b):
            continue
        table[(a, b)] = n
    others = sorted(meet)
    for i, a in enumerate(others):
        for b in others[i + 1:]:
            table[_pair(a, b)] = table.get(_pair(a, b), 0) + meet[a] * meet[b]

    snc = config.snc_attested and len(others) <= 2 and all(n == 1 for n in meet.values())
    points = None
    if config.points is not None and snc:
        points = [p for p in config.points if e not in p.curves]
        if len(others) == 2:
            points.append(Point(f"blowdown:{e}", tuple(others)))
    return CurveConfig(tuple(curves), table, snc, tuple(points) if points is not None else None)
