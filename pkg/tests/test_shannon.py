import random
from fractions import Fraction
from itertools import combinations

import pytest

from entrodim.core import LinearInequality, eval_slack, subsets
from entrodim.distributions import entropy_vector_float, JointDistribution
from entrodim.dsl import format_inequality, parse_inequality
from entrodim.shannon import (
    ELEMENTAL_RANGE,
    FarkasWitness,
    ShannonCertificate,
    VerificationError,
    elemental_inequalities,
    is_shannon_type,
    num_elemental_inequalities,
    verify_certificate,
    verify_farkas,
    zhang_yeung,
)

EQ1 = parse_inequality("2 H(x,y,z) <= H(x,y) + H(x,z) + H(y,z)")

# the separating point produced for the Zhang-Yeung inequality; pinned
# output of the deterministic pivot rule, mathematical validity is
# rechecked from scratch in test_zhang_yeung_farkas_point
ZY_POINT = {
    1: Fraction(1, 2),
    2: Fraction(1, 2),
    3: Fraction(1),
    4: Fraction(1, 2),
    5: Fraction(3, 4),
    6: Fraction(3, 4),
    7: Fraction(1),
    8: Fraction(1, 2),
    9: Fraction(3, 4),
    10: Fraction(3, 4),
    11: Fraction(1),
    12: Fraction(3, 4),
    13: Fraction(1),
    14: Fraction(1),
    15: Fraction(1),
}


def _slack(ineq, point):
    return sum(
        (c * point.get(mask, Fraction(0)) for mask, c in ineq.coeffs.items()),
        Fraction(0),
    )


def test_row_counts():
    assert len(elemental_inequalities(2).rows) == 3
    assert len(elemental_inequalities(3).rows) == 9
    assert len(elemental_inequalities(4).rows) == 28
    for m in ELEMENTAL_RANGE:
        # count (i, j, K) choices directly, without the closed form
        direct = m
        for i, j in combinations(range(1, m + 1), 2):
            rest = [p for p in range(1, m + 1) if p not in (i, j)]
            for size in range(len(rest) + 1):
                direct += len(list(combinations(rest, size)))
        assert num_elemental_inequalities(m) == direct
        assert len(elemental_inequalities(m).rows) == direct


def test_rows_distinct():
    for m in (2, 3, 4):
        rows = elemental_inequalities(m).rows
        seen = {tuple(sorted(r.coeffs.items())) for r in rows}
        assert len(seen) == len(rows)


def test_m2_layout():
    rows = elemental_inequalities(2).rows
    names = ("x", "y")
    assert format_inequality(rows[0], names) == "1 H(y) <= 1 H(x,y)"
    assert format_inequality(rows[1], names) == "1 H(x) <= 1 H(x,y)"
    assert format_inequality(rows[2], names) == "1 H(x,y) <= 1 H(x) + 1 H(y)"


def test_m3_layout():
    rows = elemental_inequalities(3).rows
    # monotonicities first
    assert rows[0].coeffs == {7: Fraction(1), 6: Fraction(-1)}
    assert rows[1].coeffs == {7: Fraction(1), 5: Fraction(-1)}
    assert rows[2].coeffs == {7: Fraction(1), 3: Fraction(-1)}
    # then pair (1,2) with K empty, K={3}; (1,3); (2,3)
    assert rows[3].coeffs == {1: Fraction(1), 2: Fraction(1), 3: Fraction(-1)}
    assert rows[4].coeffs == {
        5: Fraction(1), 6: Fraction(1), 7: Fraction(-1), 4: Fraction(-1)
    }
    assert rows[5].coeffs == {1: Fraction(1), 4: Fraction(1), 5: Fraction(-1)}
    assert rows[6].coeffs == {
        3: Fraction(1), 6: Fraction(1), 7: Fraction(-1), 2: Fraction(-1)
    }
    assert rows[7].coeffs == {2: Fraction(1), 4: Fraction(1), 6: Fraction(-1)}
    assert rows[8].coeffs == {
        3: Fraction(1), 5: Fraction(1), 7: Fraction(-1), 1: Fraction(-1)
    }


def test_m_out_of_range():
    with pytest.raises(ValueError):
        elemental_inequalities(1)
    with pytest.raises(ValueError):
        elemental_inequalities(7)


def test_monotonicity_is_certified_by_itself():
    res = is_shannon_type(parse_inequality("H(x) <= H(x,y)"))
    assert isinstance(res, ShannonCertificate)
    assert res.weights == {1: Fraction(1)}


def test_eq1_certificate():
    res = is_shannon_type(EQ1)
    assert isinstance(res, ShannonCertificate)
    assert res.weights == {4: Fraction(1), 6: Fraction(1), 7: Fraction(1)}
    verify_certificate(EQ1, res)
    # the same weights written by hand: I(x;y|z) + I(x;z|y) + I(y;z)
    verify_certificate(
        EQ1, ShannonCertificate(3, {4: Fraction(1), 6: Fraction(1), 7: Fraction(1)})
    )
    assert res.to_json()["weights"] == {"4": "1", "6": "1", "7": "1"}


def test_perturbed_certificate_rejected():
    bad = ShannonCertificate(
        3, {4: Fraction(1), 6: Fraction(1), 7: Fraction(1001, 1000)}
    )
    with pytest.raises(VerificationError) as err:
        verify_certificate(EQ1, bad)
    assert "mismatch at subset" in str(err.value)


def test_malformed_certificates_rejected():
    with pytest.raises(VerificationError):
        verify_certificate(EQ1, ShannonCertificate(3, {99: Fraction(1)}))
    with pytest.raises(VerificationError):
        verify_certificate(EQ1, ShannonCertificate(3, {4: Fraction(-1)}))
    with pytest.raises(VerificationError):
        verify_certificate(EQ1, ShannonCertificate(4, {4: Fraction(1)}))


def test_elemental_rows_certify_themselves():
    for m in (2, 3):
        for row in elemental_inequalities(m).rows:
            res = is_shannon_type(row)
            assert isinstance(res, ShannonCertificate)
            verify_certificate(row, res)


def test_zhang_yeung_fixture():
    zy = zhang_yeung()
    assert zy.m == 4
    assert zy.coeffs == {
        1: Fraction(-1),
        3: Fraction(-1),
        4: Fraction(-2),
        5: Fraction(3),
        6: Fraction(1),
        8: Fraction(-2),
        9: Fraction(3),
        10: Fraction(1),
        12: Fraction(3),
        13: Fraction(-4),
        14: Fraction(-1),
    }


def test_zhang_yeung_farkas_point():
    zy = zhang_yeung()
    res = is_shannon_type(zy)
    assert isinstance(res, FarkasWitness)
    assert res.point == ZY_POINT
    verify_farkas(zy, res)
    # recheck from scratch: every elemental row nonnegative, target negative
    rows = elemental_inequalities(4).rows
    assert len(rows) == 28
    for row in rows:
        assert _slack(row, res.point) >= 0
    assert _slack(zy, res.point) == Fraction(-1, 4)
    # float rendering is a valid entropy-vector shape
    v = res.as_entropy_vector()
    assert v[15] == 1.0


def test_farkas_rejects_non_witnesses():
    zy = zhang_yeung()
    # the modular point h(I) = |I| satisfies Zhang-Yeung with equality,
    # so it separates nothing
    modular = FarkasWitness(
        4, {mask: Fraction(bin(mask).count("1")) for mask in subsets(4)}
    )
    with pytest.raises(VerificationError) as err:
        verify_farkas(zy, modular)
    assert "strictly negative" in str(err.value)
    with pytest.raises(VerificationError):
        verify_farkas(zy, FarkasWitness(4, {}))  # all-zero point
    # a point that breaks an elemental row is rejected even if the
    # target slack is negative
    broken = dict(ZY_POINT)
    broken[15] = Fraction(2)  # violates monotonicity at the top
    with pytest.raises(VerificationError) as err:
        verify_farkas(zy, FarkasWitness(4, broken))
    assert "elemental row" in str(err.value)


def _random_distribution(rng, m):
    npts = rng.randint(2, 6)
    pts = set()
    while len(pts) < npts:
        pts.add(tuple(rng.randrange(3) for _ in range(m)))
    weights = [rng.randint(1, 9) for _ in range(npts)]
    total = sum(weights)
    return JointDistribution(
        m, tuple((p, Fraction(w, total)) for p, w in zip(sorted(pts), weights))
    )


def test_membership_dichotomy_random():
    rng = random.Random(777)
    dists = [_random_distribution(rng, 3) for _ in range(10)]
    vectors = [entropy_vector_float(d) for d in dists]
    for _ in range(40):
        coeffs = {
            s: Fraction(rng.randint(-2, 2))
            for s in subsets(3)
            if rng.random() < 0.7
        }
        coeffs = {s: c for s, c in coeffs.items() if c}
        if not coeffs:
            continue
        ineq = LinearInequality(3, coeffs)
        res = is_shannon_type(ineq)
        if isinstance(res, ShannonCertificate):
            verify_certificate(ineq, res)
            # Shannon-type inequalities hold on genuine distributions
            for v in vectors:
                assert eval_slack(ineq, v) >= -1e-9
        else:
            verify_farkas(ineq, res)
            assert _slack(ineq, res.point) < 0


def test_nonneg_combinations_are_members():
    rng = random.Random(31)
    rows = elemental_inequalities(3).rows
    for _ in range(25):
        combo: dict[int, Fraction] = {}
        for r, row in enumerate(rows):
            w = Fraction(rng.randint(0, 3))
            for mask, c in row.coeffs.items():
                combo[mask] = combo.get(mask, Fraction(0)) + w * c
        combo = {s: c for s, c in combo.items() if c}
        if not combo:
            continue
        res = is_shannon_type(LinearInequality(3, combo))
        assert isinstance(res, ShannonCertificate)
