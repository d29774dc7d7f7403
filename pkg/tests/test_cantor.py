import dataclasses
import math
import random
from fractions import Fraction

import pytest

from entrodim.cantor import (
    CantorWitness,
    DimValue,
    DimensionCounterexample,
    Level,
    NoEpsilon,
    NonUniform,
    NotViolated,
    build_counterexample,
    dim_sum_sign,
    dim_value,
    lemma_fiber_bound,
    project,
    uniform_fiber,
    verify_counterexample,
)
from entrodim.core import ExactLogLin, subsets
from entrodim.dsl import parse_inequality
from entrodim.groups import cyclic, direct_product, subgroup_from_elements

KLEIN = direct_product(cyclic(2), cyclic(2), name="klein")

CANTOR_13 = CantorWitness(1, 3, frozenset({(0,), (2,)}))
PARITY = CantorWitness(
    3, 2, frozenset({(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0)})
)
FULL_SQUARE = CantorWitness(2, 2, frozenset({(0, 0), (0, 1), (1, 0), (1, 1)}))
L_SHAPE = CantorWitness(2, 2, frozenset({(0, 0), (0, 1), (1, 0)}))

LOG2_OVER_LOG3 = 0.6309297535714574


def test_witness_validation():
    with pytest.raises(ValueError):
        CantorWitness(1, 1, frozenset({(0,)}))
    with pytest.raises(ValueError):
        CantorWitness(1, 3, frozenset())
    with pytest.raises(ValueError):
        CantorWitness(1, 3, frozenset({(3,)}))
    with pytest.raises(ValueError):
        CantorWitness(2, 3, frozenset({(0,)}))


def test_witness_json_round_trip():
    obj = PARITY.to_json()
    assert obj["m"] == 3
    assert obj["N"] == 2
    assert obj["points"] == [[0, 0, 0], [0, 1, 1], [1, 0, 1], [1, 1, 0]]
    assert CantorWitness.from_json(obj) == PARITY


def test_project():
    p = project(PARITY, 0b011)
    assert p.m == 2
    assert p.points == frozenset({(0, 0), (0, 1), (1, 0), (1, 1)})
    assert project(PARITY, 0b100).points == frozenset({(0,), (1,)})
    with pytest.raises(ValueError):
        project(PARITY, 0)
    with pytest.raises(ValueError):
        project(PARITY, 0b1000)


def test_dim_value_examples():
    d = dim_value(CANTOR_13)
    assert d == DimValue(2, 3)
    assert d.to_float() == pytest.approx(LOG2_OVER_LOG3, abs=1e-15)
    assert float(d) == d.to_float()
    assert str(d) == "log2(2)/log2(3)"
    assert dim_value(FULL_SQUARE).to_float() == 2.0
    assert dim_value(PARITY).to_float() == 2.0
    # dim * log2(N) is literally log2(cardinality)
    assert (d.times_log_base() - ExactLogLin.log2(2)).sign() == 0


def test_dim_value_ordering():
    assert DimValue(2, 3) < DimValue(3, 3)
    assert DimValue(2, 3) <= DimValue(2, 3)
    assert DimValue(4, 3) > DimValue(3, 3)
    with pytest.raises(ValueError):
        DimValue(2, 3) < DimValue(2, 4)
    with pytest.raises(ValueError):
        DimValue(0, 3)
    with pytest.raises(ValueError):
        DimValue(2, 1)


def test_dim_sum_sign():
    # log2(2) - (2/3) log2(3): negative since 2^3 < 3^2
    assert dim_sum_sign(
        [(Fraction(1), DimValue(2, 3)), (Fraction(-2, 3), DimValue(3, 3))]
    ) == -1
    # 2 log2(3) - 3 log2(2): positive for the same reason
    assert dim_sum_sign(
        [(Fraction(2), DimValue(3, 2)), (Fraction(-3), DimValue(2, 2))]
    ) == 1
    assert dim_sum_sign([(Fraction(1), DimValue(4, 2)),
                         (Fraction(-2), DimValue(2, 2))]) == 0
    with pytest.raises(ValueError):
        dim_sum_sign([(Fraction(1), DimValue(2, 2)), (Fraction(1), DimValue(2, 3))])


def test_uniform_fiber():
    assert uniform_fiber(FULL_SQUARE, 0b01) == 2
    assert uniform_fiber(PARITY, 0b011) == 1
    assert uniform_fiber(PARITY, 0b001) == 2
    bad = uniform_fiber(L_SHAPE, 0b01)
    assert bad == NonUniform((0,))
    with pytest.raises(ValueError):
        uniform_fiber(FULL_SQUARE, 0b11)  # identity projection
    with pytest.raises(ValueError):
        uniform_fiber(FULL_SQUARE, 0)


def test_lemma_fiber_bound():
    pts = sorted(PARITY.points)
    assert lemma_fiber_bound(PARITY, pts, 0b011)
    assert lemma_fiber_bound(PARITY, [], 0b001)
    assert lemma_fiber_bound(PARITY, [pts[0]], 0b001)
    rng = random.Random(8)
    for _ in range(100):
        b = [p for p in pts if rng.random() < 0.5]
        assert lemma_fiber_bound(PARITY, b, rng.choice([1, 2, 3, 4]))
    with pytest.raises(ValueError):
        lemma_fiber_bound(PARITY, [(9, 9, 9)], 0b001)
    with pytest.raises(ValueError):
        lemma_fiber_bound(L_SHAPE, [], 0b01)  # non-uniform projection


def test_projection_dims_are_monotone():
    rng = random.Random(6021)
    for _ in range(50):
        m = rng.randint(2, 3)
        base = rng.randint(2, 5)
        npts = rng.randint(1, base**m)
        pts = set()
        while len(pts) < npts:
            pts.add(tuple(rng.randrange(base) for _ in range(m)))
        w = CantorWitness(m, base, frozenset(pts))
        total = dim_value(w)
        for mask in subsets(m):
            if mask == (1 << m) - 1:
                continue
            d = dim_value(project(w, mask))
            assert d <= total
            # dim of a projection never exceeds its coordinate count
            k = bin(mask).count("1")
            assert (d.times_log_base() - k * ExactLogLin.log2(base)).sign() <= 0


def test_level():
    lv = Level(4, 4, Fraction(1, 4))
    assert float(lv) == 0.75
    assert str(lv) == "max(0, log2(4)/log2(4) - 1/4)"
    clamped = Level(1, 4, Fraction(1, 4))
    assert float(clamped) == 0.0
    assert issubclass(NoEpsilon, ValueError)


def test_build_counterexample_klein():
    ineq = parse_inequality("H(x,y) <= H(x)")
    h1 = subgroup_from_elements(KLEIN, [0, 1])
    h2 = subgroup_from_elements(KLEIN, [0])
    ce = build_counterexample(ineq, KLEIN, [h1, h2])

    assert ce.witness.base == 4
    assert ce.witness.points == frozenset({(0, 0), (0, 1), (1, 2), (1, 3)})
    assert ce.dims == {1: DimValue(2, 4), 2: DimValue(4, 4), 3: DimValue(4, 4)}
    assert ce.epsilon == Fraction(1, 4)
    assert set(ce.levels) == {3}
    assert float(ce.levels[3]) == 0.75
    assert (ce.entropy_slack + ExactLogLin.bits(1)).sign() == 0
    assert str(ce.margin_times_log_base) == "-1 + 3/4*log2(4)"
    assert ce.margin_times_log_base.to_float() == pytest.approx(0.5)
    verify_counterexample(ce)

    obj = ce.to_json()
    assert obj["epsilon"] == "1/4"
    assert obj["witness"]["N"] == 4
    assert obj["dims"]["{1,2}"]["cardinality"] == 4
    assert obj["margin_times_log_base"]["float"] == pytest.approx(0.5)


def test_build_counterexample_two_sided():
    ineq = parse_inequality("2 H(x,y) <= H(x) + H(y)")
    h1 = subgroup_from_elements(KLEIN, [0, 1])
    h2 = subgroup_from_elements(KLEIN, [0, 2])
    ce = build_counterexample(ineq, KLEIN, [h1, h2])
    assert ce.witness.base == 2
    assert ce.witness.points == frozenset({(0, 0), (0, 1), (1, 0), (1, 1)})
    assert ce.epsilon == Fraction(1, 2)
    assert float(ce.levels[3]) == 1.5
    assert ce.margin_times_log_base.to_float() == pytest.approx(1.0)


def test_build_counterexample_not_violated():
    h1 = subgroup_from_elements(KLEIN, [0, 1])
    h2 = subgroup_from_elements(KLEIN, [0, 2])
    with pytest.raises(NotViolated) as err:
        build_counterexample(parse_inequality("I(x;y) >= 0"), KLEIN, [h1, h2])
    assert err.value.slack.sign() == 0
    with pytest.raises(NotViolated) as err:
        build_counterexample(
            parse_inequality("H(x) <= H(x,y)"),
            KLEIN,
            [h1, subgroup_from_elements(KLEIN, [0])],
        )
    assert err.value.slack.sign() == 1


def test_build_counterexample_arity_mismatch():
    with pytest.raises(ValueError):
        build_counterexample(
            parse_inequality("H(x,y) <= H(x)"),
            KLEIN,
            [subgroup_from_elements(KLEIN, [0, 1])],
        )


def test_verify_counterexample_rejects_tampering():
    ineq = parse_inequality("H(x,y) <= H(x)")
    h1 = subgroup_from_elements(KLEIN, [0, 1])
    h2 = subgroup_from_elements(KLEIN, [0])
    ce = build_counterexample(ineq, KLEIN, [h1, h2])

    worse = dataclasses.replace(
        ce, margin_times_log_base=ce.margin_times_log_base + ExactLogLin.bits(1)
    )
    with pytest.raises(AssertionError):
        verify_counterexample(worse)

    flat = dataclasses.replace(ce, levels={3: Level(4, 4, Fraction(0))})
    with pytest.raises(AssertionError):
        verify_counterexample(flat)

    swapped = dataclasses.replace(
        ce, dims={**ce.dims, 1: DimValue(3, 4)}
    )
    with pytest.raises(AssertionError):
        verify_counterexample(swapped)
