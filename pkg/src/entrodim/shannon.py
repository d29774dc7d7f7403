"""
Membership in the cone of Shannon-type inequalities, with certificates.

An inequality is Shannon-type when it is a nonnegative combination of
the *elemental* inequalities — the minimal generating set consisting of

* monotonicity   H(all) - H(all minus i) >= 0          (m rows)
* submodularity  H(iK) + H(jK) - H(ijK) - H(K) >= 0    (C(m,2) * 2^(m-2)
  rows, over unordered pairs i<j and K disjoint from both; K empty means
  H(i) + H(j) - H(ij) >= 0)

Membership is an exact LP: find weights y >= 0 with E^T y = c.  The
answer always comes with a checkable object — a ShannonCertificate
(the weights) or a FarkasWitness (a polymatroid point separating the
inequality from the cone) — and `is_shannon_type` verifies whichever
one it produces before returning it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .core import (
    EntropyVector,
    LinearInequality,
    mask_label,
    subsets,
)
from .dsl import parse_inequality
from .simplex import solve_eq_nonneg

#: elemental sets are available for this range of variable counts
ELEMENTAL_RANGE = range(2, 7)


class VerificationError(ValueError):
    """A certificate or witness failed its exact recheck."""


@dataclass(frozen=True)
class ElementalSet:
    """The elemental Shannon inequalities for m variables, in fixed order."""

    m: int
    rows: tuple[LinearInequality, ...]


@dataclass(frozen=True)
class ShannonCertificate:
    """Nonnegative weights expressing an inequality over elemental rows.

    weights maps row index (into elemental_inequalities(m).rows) to a
    positive rational; rows absent from the map have weight zero.
    """

    m: int
    weights: dict[int, Fraction]

    def to_json(self) -> dict:
        return {
            "kind": "shannon-certificate",
            "m": self.m,
            "weights": {str(r): str(w) for r, w in sorted(self.weights.items())},
        }


@dataclass(frozen=True)
class FarkasWitness:
    """A polymatroid point on which the target inequality fails.

    point maps subset mask to a rational; it satisfies every elemental
    inequality (so it is a polymatroid point, though not necessarily a
    genuine entropy vector) yet gives the target strictly negative slack.
    """

    m: int
    point: dict[int, Fraction]

    def as_entropy_vector(self) -> EntropyVector:
        """Float rendering; polymatroid points are nonnegative, so valid."""
        return EntropyVector.from_floats(
            self.m, {s: float(self.point.get(s, 0)) for s in subsets(self.m)}
        )

    def to_json(self) -> dict:
        return {
            "kind": "farkas-witness",
            "m": self.m,
            "point": {mask_label(s): str(q) for s, q in sorted(self.point.items())},
        }


def elemental_inequalities(m: int) -> ElementalSet:
    """Elemental rows for m variables: monotonicities, then submodularities.

    Ordering is fixed and documented: the m monotonicity rows for
    i = 1..m, then for each pair i < j (lexicographic) the rows for each
    K subset of the remaining variables in ascending mask order.
    """
    if m not in ELEMENTAL_RANGE:
        raise ValueError(
            f"elemental inequalities supported for m in {ELEMENTAL_RANGE}, got {m}"
        )
    full = (1 << m) - 1
    rows = []
    for i in range(1, m + 1):
        bit = 1 << (i - 1)
        rows.append(LinearInequality(m, {full: Fraction(1), full ^ bit: Fraction(-1)}))
    for i, j in combinations(range(1, m + 1), 2):
        bi, bj = 1 << (i - 1), 1 << (j - 1)
        rest = [p for p in range(1, m + 1) if p not in (i, j)]
        for pick in range(1 << len(rest)):
            k_mask = 0
            for t, p in enumerate(rest):
                if pick >> t & 1:
                    k_mask |= 1 << (p - 1)
            coeffs = {
                bi | k_mask: Fraction(1),
                bj | k_mask: Fraction(1),
                bi | bj | k_mask: Fraction(-1),
            }
            if k_mask:
                coeffs[k_mask] = Fraction(-1)
            rows.append(LinearInequality(m, coeffs))
    return ElementalSet(m, tuple(rows))


def num_elemental_inequalities(m: int) -> int:
    """Closed form m + C(m,2) * 2^(m-2) for the elemental row count."""
    return m + (m * (m - 1) // 2) * (1 << (m - 2))


def _row_slack(row: LinearInequality, point: dict[int, Fraction]) -> Fraction:
    return sum(
        (c * point.get(mask, Fraction(0)) for mask, c in row.coeffs.items()),
        Fraction(0),
    )


def is_shannon_type(
    ineq: LinearInequality,
) -> ShannonCertificate | FarkasWitness:
    """Decide cone membership, returning a verified certificate either way."""
    elems = elemental_inequalities(ineq.m)
    coords = subsets(ineq.m)
    a = [
        [row.coeffs.get(mask, Fraction(0)) for row in elems.rows]
        for mask in coords
    ]
    b = [ineq.coeffs.get(mask, Fraction(0)) for mask in coords]
    res = solve_eq_nonneg(a, b)
    if res.feasible:
        weights = {r: w for r, w in enumerate(res.solution) if w != 0}
        cert = ShannonCertificate(ineq.m, weights)
        verify_certificate(ineq, cert, elems)
        return cert
    # Farkas vector u has u.(col of E^T) <= 0 for every elemental row and
    # u.c > 0; negating gives a point with elemental slacks >= 0 and
    # strictly negative target slack — a separating polymatroid point.
    point = {mask: -u for mask, u in zip(coords, res.farkas) if u != 0}
    witness = FarkasWitness(ineq.m, point)
    verify_farkas(ineq, witness, elems)
    return witness


def verify_certificate(
    ineq: LinearInequality,
    cert: ShannonCertificate,
    elems: ElementalSet | None = None,
) -> None:
    """Exact coefficient-wise recheck of sum_r y_r * row_r = target."""
    if elems is None:
        elems = elemental_inequalities(ineq.m)
    if cert.m != ineq.m:
        raise VerificationError(f"certificate is for m={cert.m}, target m={ineq.m}")
    combo: dict[int, Fraction] = {}
    for r, w in cert.weights.items():
        if not 0 <= r < len(elems.rows):
            raise VerificationError(f"certificate references unknown row {r}")
        if w < 0:
            raise VerificationError(f"negative weight {w} on row {r}")
        for mask, c in elems.rows[r].coeffs.items():
            combo[mask] = combo.get(mask, Fraction(0)) + w * c
    for mask in subsets(ineq.m):
        want = ineq.coeffs.get(mask, Fraction(0))
        got = combo.get(mask, Fraction(0))
        if want != got:
            raise VerificationError(
                f"certificate mismatch at subset {mask_label(mask)}: "
                f"combination gives {got}, target has {want}"
            )


def verify_farkas(
    ineq: LinearInequality,
    witness: FarkasWitness,
    elems: ElementalSet | None = None,
) -> None:
    """Exact recheck: elemental slacks >= 0, target slack < 0."""
    if elems is None:
        elems = elemental_inequalities(ineq.m)
    if witness.m != ineq.m:
        raise VerificationError(f"witness is for m={witness.m}, target m={ineq.m}")
    for r, row in enumerate(elems.rows):
        slack = _row_slack(row, witness.point)
        if slack < 0:
            raise VerificationError(
                f"witness violates elemental row {r} (slack {slack})"
            )
    target = _row_slack(ineq, witness.point)
    if target >= 0:
        raise VerificationError(
            f"target slack on witness is {target}, expected strictly negative"
        )


def zhang_yeung() -> LinearInequality:
    """The classic four-variable inequality that is not Shannon-type.

    2 I(z;w) <= I(x;y) + I(x;z,w) + 3 I(z;w|x) + I(z;w|y), with variables
    bound in the order x, y, z, w.  Shipped as a named fixture; its
    non-membership is established by the LP here, not taken on faith.
    """
    return parse_inequality(
        "2 I(z;w) <= I(x;y) + I(x;z,w) + 3 I(z;w|x) + I(z;w|y)",
        declared_vars=("x", "y", "z", "w"),
    )
