import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gen import negdef_models, random_negdef_model, seeds
from logsurf.errors import ContractedSupport, InvalidModel, NotContractible, NotMinusOneCurve
from logsurf.fixtures import a2_chain
from logsurf.surface_model import (
    CurveConfig,
    CurveRecord,
    Divisor,
    Point,
    SingularModel,
    blow_down,
    connected_components,
    intersect_on_X,
    mumford_pullback,
    pushforward,
    validate,
)

F = Fraction


def a1_model(l_self=-1):
    cfg = CurveConfig.build(
        [CurveRecord("E", -2, 0, 0), CurveRecord("L", l_self, 0, -2 - l_self)],
        [("E", "L", 1)],
    )
    return SingularModel(cfg, {"E"})


def rules(vs):
    return [v["rule"] for v in vs]


# validate

def test_validate_clean_minus_two():
    assert validate(CurveConfig.build([("E", -2, 0, 0)])) == []


def test_validate_adjunction():
    vs = validate(CurveConfig.build([("E", -1, 0, 0)]))
    assert rules(vs) == ["adjunction"] and vs[0]["curve"] == "E"


def test_validate_points_table():
    cfg = CurveConfig.build([("C", 0, 0, -2), ("D", 0, 0, -2)], [("C", "D", 1)],
                            snc_attested=True, points=[("p", ("C", "D"))])
    assert validate(cfg) == []


def test_validate_triple_point_and_tangency():
    cfg = CurveConfig.build(
        [("A", 0, 0, -2), ("B", 0, 0, -2), ("C", 0, 0, -2)],
        [("A", "B", 2), ("A", "C", 1), ("B", "C", 1)],
        snc_attested=True,
        points=[Point("p", ("A", "B", "C")), Point("q", ("A", "B"))],
    )
    got = rules(validate(cfg))
    assert "snc_point" in got and "snc_transversal" in got


def test_validate_negative_and_unknown():
    cfg = CurveConfig(
        (CurveRecord("A", -2, 0, 0), CurveRecord("A", -2, 0, 0)),
        {("A", "Z"): -1},
    )
    got = set(rules(validate(cfg)))
    assert {"duplicate_id", "unknown_curve", "nonnegative_intersection"} <= got


def test_conflicting_pair_rejected():
    with pytest.raises(InvalidModel) as exc:
        CurveConfig.build([("A", -2, 0, 0), ("B", -2, 0, 0)], [("A", "B", 1), ("B", "A", 2)])
    assert exc.value.violations[0]["rule"] == "symmetry"


def test_check_rejects_positive_contracted():
    cfg = CurveConfig.build([("E", 0, 0, -2)])
    with pytest.raises(NotContractible):
        SingularModel(cfg, {"E"}).check()


# pullback and pairing

def test_pullback_a1():
    assert mumford_pullback(a1_model(), Divisor({"L": 1})) == Divisor({"L": 1, "E": F(1, 2)})


def test_pullback_zero():
    assert mumford_pullback(a1_model(), Divisor()) == Divisor()


def test_pullback_a2():
    model, _ = a2_chain()
    assert mumford_pullback(model, Divisor({"L": 1})) == Divisor({"L": 1, "E1": F(2, 3), "E2": F(1, 3)})


def test_pullback_refuses_contracted_support():
    with pytest.raises(ContractedSupport):
        mumford_pullback(a1_model(), Divisor({"E": 1}))


@pytest.mark.parametrize("dy, expected", [
    (Divisor({"L": 1, "E": F(1, 2)}), Divisor({"L": 1})),
    (Divisor({"E": 2}), Divisor()),
    (Divisor({"L": 1, "M": 1}), Divisor({"L": 1, "M": 1})),
])
def test_pushforward_examples(dy, expected):
    assert pushforward(SingularModel(CurveConfig(()), {"E"}), dy) == expected


def test_intersect_on_X_a1():
    m = a1_model()
    L = Divisor({"L": 1})
    assert intersect_on_X(m, L, L) == F(-1, 2)
    assert intersect_on_X(m, Divisor(), L) == 0


def test_intersect_on_X_identity_map():
    m = a1_model().with_contracted(())
    L = Divisor({"L": 1})
    assert intersect_on_X(m, L, L) == -1
    assert intersect_on_X(m, L, Divisor({"E": 1})) == 1


@given(negdef_models())
def test_projection_formula(sample):
    model, _ = sample
    cfg = model.config
    for c in model.surviving:
        p = mumford_pullback(model, Divisor({c: 1}))
        for e in model.contracted:
            assert cfg.intersect(p, Divisor({e: 1})) == 0


@given(negdef_models())
def test_pushforward_after_pullback(sample):
    model, delta = sample
    d = delta + Divisor({c: i + 1 for i, c in enumerate(model.surviving)})
    assert pushforward(model, mumford_pullback(model, d)) == d


@given(negdef_models(), st.data())
def test_composition_consistency(sample, data):
    # pulling back from X_T to X_S and then to Y agrees with pulling back directly
    model, delta = sample
    T = sorted(model.contracted)
    S = data.draw(st.sets(st.sampled_from(T)))
    mid = model.with_contracted(S)
    d = delta + Divisor({c: 1 for c in model.surviving})
    direct = mumford_pullback(model, d)
    assert mumford_pullback(mid, pushforward(mid, direct)) == direct


@given(negdef_models())
def test_pairing_symmetric(sample):
    model, _ = sample
    ids = model.surviving
    for a in ids:
        for b in ids:
            assert intersect_on_X(model, Divisor({a: 1}), Divisor({b: 1})) == \
                intersect_on_X(model, Divisor({b: 1}), Divisor({a: 1}))


# blow-down calculus

def test_blow_down_plane_line():
    cfg = CurveConfig.build([("E", -1, 0, -1), ("L", 0, 0, -2)], [("E", "L", 1)])
    out = blow_down(cfg, "E")
    assert out.ids == ("L",)
    assert (out.curve("L").self_int, out.curve("L").k_dot) == (1, -3)


def test_blow_down_joins_neighbours():
    cfg = CurveConfig.build([("E", -1, 0, -1), ("C", -2, 0, 0), ("D", -3, 0, 1)],
                            [("E", "C", 1), ("E", "D", 1)])
    out = blow_down(cfg, "E")
    assert out.dot("C", "D") == 1


def test_blow_down_disjoint_unchanged():
    cfg = CurveConfig.build([("E", -1, 0, -1), ("C", -2, 0, 0)])
    assert blow_down(cfg, "E").curve("C") == CurveRecord("C", -2, 0, 0)


def test_blow_down_refuses():
    with pytest.raises(NotMinusOneCurve):
        blow_down(CurveConfig.build([("E", -2, 0, 0)]), "E")


def test_blow_down_snc_tracking():
    pts = [("p", ("E", "A")), ("q", ("E", "B"))]
    cfg = CurveConfig.build([("E", -1, 0, -1), ("A", 0, 0, -2), ("B", 0, 0, -2)],
                            [("E", "A", 1), ("E", "B", 1)], snc_attested=True, points=pts)
    out = blow_down(cfg, "E")
    assert out.snc_attested and validate(out) == []
    tangent = CurveConfig.build([("E", -1, 0, -1), ("A", 0, 0, -2)], [("E", "A", 2)],
                                snc_attested=True)
    assert not blow_down(tangent, "E").snc_attested


@given(seeds())
def test_blow_down_preserves_adjunction(seed):
    rng = random.Random(seed)
    model, _ = random_negdef_model(rng, allow_minus_one=True)
    cfg = model.config
    minus_one = [c for c in cfg.ids if cfg.curve(c).self_int == -1 and cfg.curve(c).genus == 0]
    for e in minus_one:
        out = blow_down(cfg, e)
        assert len(out.curves) == len(cfg.curves) - 1
        assert [v for v in validate(out) if v["rule"] == "adjunction"] == []


def test_components_sorted():
    cfg = CurveConfig.build([("A", -2, 0, 0), ("B", -2, 0, 0), ("C", -2, 0, 0)], [("A", "C", 1)])
    assert connected_components(cfg, ["C", "B", "A"]) == [frozenset("AC"), frozenset("B")]


def test_divisor_algebra():
    D = Divisor({"A": F(1, 2), "B": 0})
    assert D.support == {"A"}
    assert D + D == Divisor({"A": 1})
    assert 2 * D - Divisor({"A": 1}) == 0
    assert Divisor() <= D and D.is_effective()
    assert not (-D).is_effective()
