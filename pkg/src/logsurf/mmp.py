"""Cone, contraction and the minimal model program on a curve universe.

Curve classes on X are represented by their Mumford intersection numbers
with every universe curve.  For toric input the torus-invariant curves span
the Mori cone, so the cone computed here is the true cone; for hand-built
input every statement is relative to the declared universe and the trace
says so.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional

from .discrepancy import (
    ClassificationReport,
    ClassifyOptions,
    classify,
    log_degree,
    log_pullback,
    minimal_resolution,
)
from .errors import (
    ContractionNotNegDef,
    EmptyUniverse,
    ModelingInconsistency,
    NotBirationalRay,
    NotGMRLC,
)
from .exactlin import QMatrix, in_cone, is_negative_definite, rank
from .surface_model import (
    Divisor,
    SingularModel,
    connected_components,
    intersect_on_X,
    mumford_pullback,
    pushforward,
)
from .toric import NotNef, current_fan, nef_semiample_witness

log = logging.getLogger(__name__)

BIRATIONAL = "birational"
FIBER = "fiber-type"
AMPLE_ANTI = "ample-anti"
ABUNDANCE_CITATION = (
    "nef; semi-ample by the abundance theorem for GMRLC surfaces (cited, not computed)"
)


@dataclass(frozen=True)
class RayCandidate:
    curve: str
    kdelta_deg: Fraction
    self_int_X: Fraction
    kind: str
    curves: tuple[str, ...] = ()  # every universe curve on this ray


@dataclass(frozen=True)
class GoodMinimalModel:
    nef_certificate: dict
    semiample: object  # SemiampleWitness or a citation string
    kind: str = "good_minimal_model"


@dataclass(frozen=True)
class MoriFiberSpace:
    ray: RayCandidate
    base_dimension: Optional[int]  # None when the base is not determined (vertical-only runs)
    relative_picard_rank: int
    certificate: str
    kind: str = "mori_fiber_space"


@dataclass
class MMPStep:
    ray: RayCandidate
    before: SingularModel
    after: SingularModel
    delta: Divisor
    report: ClassificationReport
    bound_ok: bool


@dataclass
class MMPTrace:
    initial: SingularModel
    initial_delta: Divisor
    initial_report: ClassificationReport
    initial_rank: int
    steps: list[MMPStep] = field(default_factory=list)
    outcome: object = None
    final_model: Optional[SingularModel] = None
    final_delta: Optional[Divisor] = None
    universe_complete: bool = False
    violations: list[str] = field(default_factory=list)
    bound_checks: list[tuple[str, Fraction, bool]] = field(default_factory=list)

    @property
    def birational_steps(self) -> int:
        return len(self.steps)


def kdelta_degree(model: SingularModel, delta: Divisor, cid: str,
                  delta_y: Optional[Divisor] = None) -> Fraction:
    """(K_X + Delta) . C via the log pullback to Y."""
    if delta_y is None:
        delta_y = log_pullback(model, delta, allow_out_of_range=True)
    return log_degree(model.config, delta_y, cid)


def gram_matrix(model: SingularModel, ids) -> QMatrix:
    """Mumford intersection matrix of the given curves of X."""
    ids = list(ids)
    pulled = [mumford_pullback(model, Divisor({a: 1})) for a in ids]
    return QMatrix.of([[model.config.intersect(p, Divisor({b: 1})) for b in ids] for p in pulled])


def universe_rank(model: SingularModel, universe: Optional[Iterable[str]] = None) -> int:
    ids = list(model.universe_ids if universe is None else universe)
    return rank(gram_matrix(model, ids)) if ids else 0


def _proportional(u, v) -> bool:
    """u = lambda * v for some lambda > 0."""
    # all 2x2 minors vanish and some matching entries share sign
    n = len(u)
    for i in range(n):
        for j in range(i + 1, n):
            if u[i] * v[j] != u[j] * v[i]:
                return False
    return any(a * b > 0 for a, b in zip(u, v))


def cone_extremal_groups(vectors: dict[str, list[Fraction]]) -> list[list[str]]:
    """Group generators by the ray they span and keep the extremal rays.

    A ray is extremal when its direction is not a nonnegative combination of
    generators on other rays.
    """
    groups: list[list[str]] = []
    for cid in sorted(vectors):
        v = vectors[cid]
        if all(x == 0 for x in v):
            continue
        for g in groups:
            if _proportional(v, vectors[g[0]]):
                g.append(cid)
                break
        else:
            groups.append([cid])
    out = []
    for g in groups:
        others = [vectors[h[0]] for h in groups if h is not g]
        if not in_cone(vectors[g[0]], others):
            out.append(g)
    return out


def extremal_rays(model: SingularModel, delta: Divisor, universe: Optional[Iterable[str]] = None,
                  vertical_only: bool = False) -> list[RayCandidate]:
    """(K_X + Delta)-negative extremal rays of the cone spanned by the universe."""
    universe = list(model.universe_ids if universe is None else universe)
    if not universe:
        raise EmptyUniverse("curve universe is empty")
    bad = sorted(set(universe) & model.contracted)
    if bad:
        raise ValueError(f"universe curves {bad} are contracted on X")
    cfg = model.config
    gram = gram_matrix(model, universe)
    vectors = {c: list(gram.rows[i]) for i, c in enumerate(universe)}
    gens = [c for c in universe if cfg.curve(c).vertical] if vertical_only else universe
    if not gens:
        return []
    rho = rank(QMatrix.of([vectors[c] for c in gens]))
    delta_y = log_pullback(model, delta, allow_out_of_range=True)
    out = []
    for group in cone_extremal_groups({c: vectors[c] for c in gens}):
        degs = {c: log_degree(cfg, delta_y, c) for c in group}
        if degs[group[0]] >= 0:
            continue
        # the curve with the smallest |(K+Delta).C| spans the ray best
        rep = min(group, key=lambda c: (-degs[c], c))
        c2 = gram.rows[universe.index(rep)][universe.index(rep)]
        if c2 < 0:
            kind = BIRATIONAL
        elif rho == 1:
            kind = AMPLE_ANTI
        elif c2 == 0 and all(x >= 0 for x in vectors[rep]):
            kind = FIBER
        else:
            raise ModelingInconsistency(
                f"extremal ray of {rep} has C^2 = {c2} in rank {rho}; universe looks inconsistent"
            )
        out.append(RayCandidate(rep, degs[rep], c2, kind, tuple(group)))
    out.sort(key=lambda r: (r.kdelta_deg, r.curve))
    return out


def contract_ray(model: SingularModel, ray: RayCandidate) -> SingularModel:
    """Contract the curve spanning a birational extremal ray."""
    if ray.kind != BIRATIONAL:
        raise NotBirationalRay(f"ray of {ray.curve} is {ray.kind}, not birational")
    new = model.with_contracted(model.contracted | {ray.curve})
    comp = next(c for c in connected_components(new.config, new.contracted) if ray.curve in c)
    if not is_negative_definite(new.config.matrix(sorted(comp))):
        raise ContractionNotNegDef(f"contracting {ray.curve} gives a non-negative-definite {sorted(comp)}")
    before, after = universe_rank(model), universe_rank(new)
    if after != before - 1:
        raise ModelingInconsistency(
            f"universe rank went from {before} to {after} when contracting {ray.curve}"
        )
    return new


def canonical_square_rank_one(model: SingularModel, universe=None) -> Optional[Fraction]:
    """K_X^2 when the universe has rank 1 (K is then proportional to any curve)."""
    ids = list(model.universe_ids if universe is None else universe)
    for c in ids:
        c2 = intersect_on_X(model, Divisor({c: 1}), Divisor({c: 1}))
        if c2 != 0:
            k = kdelta_degree(model, Divisor(), c)
            return k * k / c2
    return None


def looks_like_plane(model: SingularModel) -> bool:
    """Numeric test for X = P^2: smooth, Picard rank 1 and K^2 = 9."""
    if minimal_resolution(model).contracted:
        return False
    if universe_rank(model) != 1:
        return False
    return canonical_square_rank_one(model) == 9


def check_extremal_bound(model: SingularModel, delta: Divisor, ray: RayCandidate) -> bool:
    """0 < -(K+Delta).C <= 3, and <= 2 unless X is the plane."""
    val = -ray.kdelta_deg
    if not val > 0:
        return False
    limit = 3 if looks_like_plane(model) else 2
    return val <= limit


def _good_minimal_model(model: SingularModel, delta: Divisor, universe) -> GoodMinimalModel:
    delta_y = log_pullback(model, delta, allow_out_of_range=True)
    cert = {c: log_degree(model.config, delta_y, c) for c in universe}
    assert all(v >= 0 for v in cert.values())
    semiample: object = ABUNDANCE_CITATION
    fan = current_fan(model) if model.universe_complete else None
    if fan is not None:
        toric_ids = set(model.universe_ids)
        if delta.support <= toric_ids:
            kx_delta = Divisor({c: -1 for c in model.universe_ids}) + delta
            w = nef_semiample_witness(fan, model, kx_delta)
            if isinstance(w, NotNef):
                raise ModelingInconsistency(f"nef certificate contradicts toric check at {w.curve}")
            semiample = w
    return GoodMinimalModel(cert, semiample)


def run_mmp(model: SingularModel, delta: Divisor = Divisor(), universe=None,
            vertical_only: bool = False, options: Optional[ClassifyOptions] = None,
            on_step: Optional[Callable[[MMPStep], None]] = None) -> MMPTrace:
    """Run the (K_X + Delta)-MMP until a good minimal model or a Mori fiber space.

    Birational rays are contracted first (most negative degree, then curve
    id).  Only when no birational ray is left does a fiber-type or
    anti-ample ray end the run.
    """
    report = classify(model, delta, options)
    if report.gmrlc.value is not True:
        raise NotGMRLC(f"pair is not GMRLC: {report.gmrlc.reason}")
    if universe is not None:
        model = SingularModel(model.config, model.contracted, tuple(universe),
                              model.universe_complete, model.q_factorial_asserted)
    rho0 = universe_rank(model)
    trace = MMPTrace(model, delta, report, rho0, universe_complete=model.universe_complete)
    start = {
        "lc": report.lc.value is True,
        "mrlc": report.mrlc.value is True,
        "q_factorial": report.q_factorial.value is True,
    }
    cur, cur_delta = model, delta
    while True:
        rays = extremal_rays(cur, cur_delta, None, vertical_only)
        for r in rays:
            ok = check_extremal_bound(cur, cur_delta, r)
            trace.bound_checks.append((r.curve, r.kdelta_deg, ok))
            if not ok:
                trace.violations.append(f"extremal bound fails for {r.curve}: {r.kdelta_deg}")
        birational = [r for r in rays if r.kind == BIRATIONAL]
        if birational:
            ray = birational[0]
            nxt = contract_ray(cur, ray)
            nxt_delta = pushforward(nxt, cur_delta)
            rep = classify(nxt, nxt_delta, options)
            step = MMPStep(ray, cur, nxt, nxt_delta, rep, check_extremal_bound(cur, cur_delta, ray))
            trace.steps.append(step)
            log.debug("contracted %s (K+D).C=%s", ray.curve, ray.kdelta_deg)
            i = len(trace.steps)
            if rep.gmrlc.value is not True:
                trace.violations.append(f"step {i}: GMRLC lost ({rep.gmrlc.reason})")
            for name in ("lc", "mrlc", "q_factorial"):
                if start[name] and getattr(rep, name).value is not True:
                    trace.violations.append(f"step {i}: {name} lost")
            if len(trace.steps) > rho0 - 1:
                trace.violations.append(f"step {i}: more than rho - 1 = {rho0 - 1} contractions")
            if on_step is not None:
                on_step(step)
            cur, cur_delta = nxt, nxt_delta
            continue
        if rays:
            ray = rays[0]
            rho = universe_rank(cur)
            if ray.kind == AMPLE_ANTI and vertical_only:
                trace.outcome = MoriFiberSpace(
                    ray, None, 1, "vertical classes span one ray; relative Picard rank 1"
                )
            elif ray.kind == AMPLE_ANTI:
                trace.outcome = MoriFiberSpace(ray, 0, rho, "Picard rank 1 and -(K+Delta) ample")
            else:
                trace.outcome = MoriFiberSpace(
                    ray, 1, 1, "extremal nef class with square 0; relative Picard rank 1"
                )
        else:
            trace.outcome = _good_minimal_model(cur, cur_delta, cur.universe_ids)
        trace.final_model, trace.final_delta = cur, cur_delta
        return trace
