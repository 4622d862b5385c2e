"""Log pullbacks and the klt / lc / MRLC / GMRLC taxonomy.

The central computation is the log pullback: for a pair (X, Delta) given on
a resolution Y, find Delta_Y with K_Y + Delta_Y numerically trivial on every
contracted curve and pushing forward to Delta.  All verdicts are read off
the coefficients of Delta_Y on suitable models.
"""

from __future__ import annotations

import itertools
import math
import os
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Optional

from .errors import (
    BoundaryOutOfRange,
    InvalidCurveData,
    InvalidModel,
    NotConnected,
    NotContractible,
    NotLogResolution,
    NotNefOver,
    NotNegativeDefinite,
)
from .exactlin import as_rational, is_negative_definite, solve_linear
from .surface_model import (
    CurveConfig,
    Divisor,
    SingularModel,
    _check_off_contracted,
    _solve_exceptional,
    blow_down,
    connected_components,
    is_minus_one_curve,
)

DEFAULT_MAX_SUBSET = 20
ZERO = Fraction(0)
ONE = Fraction(1)

CHARACTERISTIC_NOTE = (
    "intersection calculus is characteristic-free; characteristic-specific "
    "hypotheses are not modeled"
)
LOG_RESOLUTION_NOTE = (
    "klt/lc are read off one log resolution (SNC attested); a single log "
    "resolution suffices for surfaces"
)


@dataclass(frozen=True)
class Verdict:
    """Three-valued answer: ``value`` is True, False, or None (undecided)."""

    value: Optional[bool]
    reason: str = ""
    witness: Any = None

    @property
    def decided(self) -> bool:
        return self.value is not None

    def __bool__(self):
        raise TypeError("Verdict is three-valued; test .value explicitly")


@dataclass(frozen=True)
class PointCertificate:
    component: tuple[str, ...]
    cycle: Divisor
    arithmetic_genus: int

    @property
    def rational(self) -> bool:
        return self.arithmetic_genus == 0


@dataclass(frozen=True)
class ClassificationReport:
    klt: Verdict
    lc: Verdict
    mrlc: Verdict
    gmrlc: Verdict
    q_factorial: Verdict
    delta_Y: Divisor
    delta_min_res: Divisor
    points: tuple[PointCertificate, ...] = ()
    notes: tuple[str, ...] = ()


@dataclass(frozen=True)
class RoundedDivisor:
    floor: Divisor
    ceil: Divisor
    frac: Divisor


@dataclass
class ClassifyOptions:
    """Knobs for :func:`classify`.

    ``max_subset`` caps the number of contracted curves for which the GMRLC
    witness search is exhaustive; it defaults to ``$MMP_SURFACE_MAX_SUBSET``.
    """

    max_subset: int = field(
        default_factory=lambda: int(os.environ.get("MMP_SURFACE_MAX_SUBSET", DEFAULT_MAX_SUBSET))
    )


def boundary_violations(delta: Divisor) -> list[dict]:
    return [
        {"rule": "boundary_coefficient_range", "curve": c, "coefficient": str(v)}
        for c, v in delta.items()
        if not (ZERO < v <= ONE)
    ]


def log_pullback(model: SingularModel, delta: Divisor, *, allow_out_of_range=False) -> Divisor:
    """Delta_Y with K_Y + Delta_Y = f^*(K_X + Delta) and f_* Delta_Y = Delta."""
    _check_off_contracted(model, delta)
    bad = boundary_violations(delta)
    if bad and not allow_out_of_range:
        raise BoundaryOutOfRange("boundary coefficients outside (0, 1]", bad)
    cfg = model.config
    # (K_Y + Delta + sum c_j E_j) . E_i = 0
    corr = _solve_exceptional(
        model,
        lambda e: -(cfg.curve(e).k_dot + sum((x * cfg.dot(a, e) for a, x in delta.items()), ZERO)),
    )
    return delta + Divisor(corr)


def log_degree(config: CurveConfig, delta_y: Divisor, cid: str) -> Fraction:
    """(K_Y + Delta_Y) . C on the smooth model."""
    return config.curve(cid).k_dot + sum((x * config.dot(a, cid) for a, x in delta_y.items()), ZERO)


def round_ops(d: Divisor) -> RoundedDivisor:
    fl = Divisor({c: math.floor(v) for c, v in d.items()})
    ce = Divisor({c: math.ceil(v) for c, v in d.items()})
    return RoundedDivisor(fl, ce, d - fl)


def minimal_resolution(model: SingularModel, *, rng: Optional[random.Random] = None) -> SingularModel:
    """Blow down contracted (-1)-curves of genus 0 until none are left.

    With ``rng`` the next curve is picked at random instead of in id order;
    the result is the same either way (used to test confluence).
    """
    cfg = model.config
    contracted = set(model.contracted)
    while True:
        cands = sorted(c for c in contracted if is_minus_one_curve(cfg.curve(c)))
        if not cands:
            break
        e = rng.choice(cands) if rng is not None else cands[0]
        cfg = blow_down(cfg, e)
        contracted.discard(e)
    out = SingularModel(
        cfg,
        frozenset(contracted),
        model.universe,
        model.universe_complete,
        model.q_factorial_asserted,
    )
    assert all(cfg.curve(c).k_dot >= 0 for c in contracted)
    return out


def fundamental_cycle(model: SingularModel, component: Iterable[str]) -> tuple[Divisor, int]:
    """Artin's fundamental cycle by Laufer's algorithm, and its arithmetic genus."""
    comp = sorted(set(component))
    cfg = model.config
    if not comp:
        raise NotConnected("empty component")
    if len(connected_components(cfg, comp)) != 1:
        raise NotConnected(f"{comp} is not connected in the dual graph")
    if not is_negative_definite(cfg.matrix(comp)):
        raise NotNegativeDefinite(f"{comp} is not negative definite")
    z = {c: 1 for c in comp}

    def z_dot(e):
        return sum(n * cfg.dot(c, e) for c, n in z.items())

    while True:
        bump = next((e for e in comp if z_dot(e) > 0), None)
        if bump is None:
            break
        z[bump] += 1
    zz = sum(z[a] * z[b] * cfg.dot(a, b) for a in comp for b in comp)
    kz = sum(n * cfg.curve(c).k_dot for c, n in z.items())
    pa = 1 + (zz + kz) // 2
    assert (zz + kz) % 2 == 0
    return Divisor(z), pa


def point_certificates(model: SingularModel, curves: Iterable[str]) -> list[PointCertificate]:
    out = []
    for comp in connected_components(model.config, curves):
        z, pa = fundamental_cycle(model, comp)
        out.append(PointCertificate(tuple(sorted(comp)), z, pa))
    return out


def _certified_q_factorial(model: SingularModel, t: frozenset[str], cache: dict) -> bool:
    if not t:
        return True
    if t == model.contracted and model.q_factorial_asserted:
        return True
    for comp in connected_components(model.config, t):
        if comp not in cache:
            cache[comp] = fundamental_cycle(model, comp)[1] == 0
        if not cache[comp]:
            return False
    return True


def _gmrlc_search(model: SingularModel, delta_y: Divisor, max_subset: int,
                  fallback: Optional[frozenset[str]]) -> Verdict:
    forced = frozenset(c for c in model.contracted if not (ZERO <= delta_y[c] <= ONE))
    free = sorted(model.contracted - forced)
    cache: dict = {}
    if len(model.contracted) > max_subset:
        for t in (fallback, model.contracted):
            if t is not None and forced <= t and _certified_q_factorial(model, t, cache):
                return Verdict(True, f"witness found without exhaustive search "
                                     f"({len(model.contracted)} > cap {max_subset})", sorted(t))
        return Verdict(None, f"{len(model.contracted)} contracted curves exceed the "
                             f"search cap {max_subset}")
    for k in range(len(free) + 1):
        for extra in itertools.combinations(free, k):
            t = forced | frozenset(extra)
            if _certified_q_factorial(model, t, cache):
                return Verdict(True, "partial contraction with rational singularities "
                                     "and boundary coefficients in [0, 1]", sorted(t))
    uncertified = sorted(sorted(c) for c, ok in cache.items() if not ok)
    return Verdict(False, "no witness among partial contractions of the supplied resolution; "
                          f"components without a rationality certificate: {uncertified}")


def classify(model: SingularModel, delta: Divisor = Divisor(),
             options: Optional[ClassifyOptions] = None) -> ClassificationReport:
    opts = options or ClassifyOptions()
    model.check()
    bad = boundary_violations(delta)
    if bad:
        raise BoundaryOutOfRange("classification needs boundary coefficients in (0, 1]", bad)
    notes = [CHARACTERISTIC_NOTE]
    delta_y = log_pullback(model, delta)

    points = point_certificates(model, model.contracted)
    if all(p.rational for p in points):
        q_fact = Verdict(True, "every singular point is rational (fundamental cycle has p_a = 0)",
                         [list(p.component) for p in points])
    elif model.q_factorial_asserted:
        q_fact = Verdict(True, "asserted by input")
        notes.append("Q-factoriality of X taken from the input assertion")
    else:
        nonrat = [list(p.component) for p in points if not p.rational]
        q_fact = Verdict(None, f"certificate absent: non-rational points over {nonrat}")

    minres = minimal_resolution(model)
    delta_min = log_pullback(minres, delta)
    blown = frozenset(model.contracted - minres.contracted)
    assert delta_min.is_effective(), "negativity lemma violated on the minimal resolution"
    over_one = sorted(c for c, v in delta_min.items() if v > ONE)
    if over_one:
        mrlc = Verdict(False, f"coefficients above 1 on the minimal resolution: {over_one}")
    else:
        mrlc = Verdict(True, "minimal-resolution coefficients lie in [0, 1]", sorted(blown))

    gmrlc = _gmrlc_search(model, delta_y, opts.max_subset, blown)

    if model.config.snc_attested:
        notes.append(LOG_RESOLUTION_NOTE)
        if model.config.points is None:
            notes.append("SNC status trusted from attestation (no points table)")
        top = max(delta_y.coeffs.values(), default=ZERO)
        lc = Verdict(top <= ONE, f"largest log-resolution coefficient is {top}")
        klt = Verdict(top < ONE, f"largest log-resolution coefficient is {top}")
    elif mrlc.value is False:
        lc = Verdict(False, "not MRLC, hence not lc")
        klt = Verdict(False, "not lc, hence not klt")
    else:
        lc = Verdict(None, "NotLogResolution: model is not attested SNC")
        klt = Verdict(None, "NotLogResolution: model is not attested SNC")
    if gmrlc.value is None and mrlc.value:
        gmrlc = Verdict(True, "MRLC implies GMRLC", sorted(blown))
    gmrlc_notes = "witness search limited to partial contractions of the supplied resolution"
    notes.append(gmrlc_notes)

    return ClassificationReport(klt, lc, mrlc, gmrlc, q_fact, delta_y, delta_min,
                                tuple(points), tuple(notes))


def multiplier_floor(model: SingularModel, delta: Divisor) -> tuple[Divisor, bool]:
    """Round-down of Delta_Y on a log resolution; its vanishing positive part means klt."""
    if not model.config.snc_attested:
        raise NotLogResolution("multiplier ideal needs an SNC-attested resolution")
    fl = round_ops(log_pullback(model, delta)).floor
    return fl, all(v <= 0 for _, v in fl.items())


def nonvanishing_degree_check(g: int, degD: int, deg_ceil_negG: int, degKG, a: int, m: int) -> bool:
    """Riemann-Roch sufficient condition for H^0(C, mD + ceil(-G)) != 0.

    ``degKG`` is deg(K_C + frac(G)), which is at least 2g - 2.
    """
    degKG = as_rational(degKG)
    if g < 0:
        raise InvalidCurveData(f"negative genus {g}")
    if degD < 0 or deg_ceil_negG < 0:
        raise InvalidCurveData("degD and deg(ceil(-G)) must be nonnegative")
    if a < 1:
        raise InvalidCurveData("a must be a positive integer")
    if degKG < 2 * g - 2:
        raise InvalidCurveData(f"deg(K_C + frac(G)) = {degKG} < 2g - 2 = {2 * g - 2}")
    if g == 0:
        # deg D >= 0 and ceil(-G) >= 0 on P^1
        return m >= 0
    if m < a:
        return False
    return m * degD + deg_ceil_negG - g + 1 > 0


def theta_construction(model: SingularModel, delta: Divisor, over: Iterable[str]):
    """The divisor Theta <= Delta_Y with K_Y + Theta numerically trivial over ``over``.

    ``over`` is the exceptional set, on Y, of a further contraction; it has
    to contain the curves already contracted by ``model``.  Returns
    ``(theta, theta_plus, theta_minus)``.
    """
    over = frozenset(over)
    cfg = model.config
    unknown = sorted(c for c in over if c not in cfg)
    if unknown:
        raise KeyError(f"unknown curve ids {unknown}")
    if not model.contracted <= over:
        raise ValueError("`over` must contain every curve contracted by the model")
    for comp in connected_components(cfg, over):
        if not is_negative_definite(cfg.matrix(sorted(comp))):
            raise NotContractible(f"{sorted(comp)} cannot be contracted")
    delta_y = log_pullback(model, delta)
    degs = {e: log_degree(cfg, delta_y, e) for e in sorted(over)}
    positive = sorted(e for e, d in degs.items() if d > 0)
    if positive:
        raise NotNefOver(f"-(K_Y + Delta_Y) is not nef over the contraction: positive on {positive}")
    outside = delta_y.drop(over)
    ids = sorted(over)
    rhs = [-(cfg.curve(e).k_dot + sum((x * cfg.dot(a, e) for a, x in outside.items()), ZERO))
           for e in ids]
    sol = solve_linear(cfg.matrix(ids), rhs)
    theta = outside + Divisor(dict(zip(ids, sol)))
    plus = Divisor({c: v for c, v in theta.items() if v > 0})
    minus = Divisor({c: -v for c, v in theta.items() if v < 0})
    assert theta <= delta_y
    assert minus.support <= over
    return theta, plus, minus


def validate_model(model: SingularModel) -> list[dict]:
    """Violations of a model, including the contractibility condition."""
    try:
        model.check()
    except InvalidModel as exc:
        return exc.violations
    except NotContractible as exc:
        return [{"rule": "negative_definite", "detail": str(exc)}]
    return []
