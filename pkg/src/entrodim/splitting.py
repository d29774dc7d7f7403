"""
Projection-cardinality inequalities on finite point sets, and splittings.

The continuous statements about dimensions of a body and its shadows
have finite counterparts where every "dimension" becomes the log of a
cardinality.  This module checks three of them on explicit point sets:

* the Loomis-Whitney bound 2 log2 #S <= log2 #S12 + log2 #S13 + log2 #S23
  (always true; the checker reports the slack);
* the unsplit bound log2 #S1 + log2 #S <= log2 #S12 + log2 #S13, which
  is *false* in general — `cube_bar_instance` builds the classic
  cube-plus-bar refutation, decided by exact integer products;
* split existence: whether S decomposes into parts S^I, one per subset
  family member I, with each part's I-projection under a given budget.
  `find_split_exhaustive` is a complete backtracking search (bounded
  state space); `find_split_greedy` is a fast sound-but-incomplete
  heuristic.  Every returned split is re-verified by direct counting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

from .core import FLOAT_TOL, mask_label, mask_positions, subsets

Point = tuple[int, ...]

#: hard ceiling on the exhaustive assignment space |parts| ** |S|
EXHAUSTIVE_BOUND = 10**7


class ExhaustiveBoundExceeded(ValueError):
    """The assignment space is too large for exhaustive search."""


@dataclass(frozen=True)
class FiniteBody:
    """A nonempty set of m-tuples with entries in 0..N-1."""

    m: int
    base: int
    points: frozenset[Point]

    def __post_init__(self):
        if self.base < 1:
            raise ValueError("base must be positive")
        pts = frozenset(tuple(p) for p in self.points)
        if not pts:
            raise ValueError("empty body")
        for pt in pts:
            if len(pt) != self.m:
                raise ValueError(f"point {pt} is not an {self.m}-tuple")
            for x in pt:
                if not 0 <= x < self.base:
                    raise ValueError(f"coordinate {x} out of range for base {self.base}")
        object.__setattr__(self, "points", pts)

    @classmethod
    def from_json(cls, obj: dict) -> "FiniteBody":
        return cls(
            int(obj["m"]), int(obj["N"]), frozenset(tuple(p) for p in obj["points"])
        )

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "N": self.base,
            "points": sorted(list(p) for p in self.points),
        }


def _proj(point: Point, mask: int) -> Point:
    return tuple(point[i - 1] for i in mask_positions(mask))


def projection_count(body: FiniteBody, mask: int) -> int:
    """Number of distinct projections of the body onto the subset."""
    if not 0 < mask < (1 << body.m):
        raise ValueError(f"subset mask {mask} out of range for m={body.m}")
    return len({_proj(p, mask) for p in body.points})


def loomis_whitney_slack(body: FiniteBody) -> float:
    """log2 #S12 + log2 #S13 + log2 #S23 - 2 log2 #S, never negative."""
    if body.m != 3:
        raise ValueError("Loomis-Whitney check needs a three-dimensional body")
    total = math.fsum(
        math.log2(projection_count(body, (1 << i) | (1 << j)))
        for i, j in combinations(range(3), 2)
    )
    return total - 2.0 * math.log2(len(body.points))


def cube_bar_instance(k: int) -> FiniteBody:
    """A k-cube plus a bar of length k**1.5 along the first axis.

    The bar is long enough that the unsplit projection bound fails: the
    body's first-axis shadow is huge while the 12- and 13-shadows barely
    grow.  k must be a perfect square so the bar length is integral.
    """
    r = math.isqrt(k)
    if r * r != k:
        raise ValueError(f"k must be a perfect square, got {k}")
    if k < 4:
        raise ValueError("k must be at least 4")
    bar = k * r
    points = {(x, y, z) for x in range(k) for y in range(k) for z in range(k)}
    points |= {(x, 0, 0) for x in range(bar)}
    return FiniteBody(3, bar, frozenset(points))


@dataclass(frozen=True)
class UnsplitReport:
    """Both sides of log2 #S1 + log2 #S <= log2 #S12 + log2 #S13, decided
    exactly by comparing the products #S1 * #S and #S12 * #S13."""

    v1: int
    v: int
    v12: int
    v13: int
    lhs_bits: float
    rhs_bits: float
    lhs_product: int
    rhs_product: int
    sign: int  # sign of lhs - rhs: +1 means the bound is violated

    @property
    def violated(self) -> bool:
        return self.sign > 0


def check_unsplit_inequality(body: FiniteBody) -> UnsplitReport:
    if body.m != 3:
        raise ValueError("unsplit check needs a three-dimensional body")
    v1 = projection_count(body, 0b001)
    v12 = projection_count(body, 0b011)
    v13 = projection_count(body, 0b101)
    v = len(body.points)
    lhs, rhs = v1 * v, v12 * v13
    return UnsplitReport(
        v1=v1,
        v=v,
        v12=v12,
        v13=v13,
        lhs_bits=math.log2(v1) + math.log2(v),
        rhs_bits=math.log2(v12) + math.log2(v13),
        lhs_product=lhs,
        rhs_product=rhs,
        sign=(lhs > rhs) - (lhs < rhs),
    )


@dataclass(frozen=True)
class SplitSpec:
    """Budgets a_I in bits for each part's own projection.

    levels maps a subset mask I to a budget: a float (bits), or any
    object with __float__ — the exact Level/DimValue objects from the
    dimension pipeline slot in directly.
    """

    m: int
    levels: dict[int, object]

    def __post_init__(self):
        if not self.levels:
            raise ValueError("split spec needs at least one part")
        valid = set(subsets(self.m))
        for mask in self.levels:
            if mask not in valid:
                raise ValueError(f"part mask {mask} out of range for m={self.m}")

    def bits(self, mask: int) -> float:
        return float(self.levels[mask])

    @classmethod
    def from_json(cls, obj: dict) -> "SplitSpec":
        levels = {}
        for entry in obj["levels"]:
            mask = 0
            for p in entry["part"]:
                mask |= 1 << (int(p) - 1)
            levels[mask] = float(entry["bits"])
        return cls(int(obj["m"]), levels)

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "levels": [
                {"part": list(mask_positions(mask)), "bits": self.bits(mask)}
                for mask in sorted(self.levels)
            ],
        }


@dataclass(frozen=True)
class SplitResult:
    """An assignment of every body point to one part I of the spec."""

    assignment: dict[Point, int]

    def part(self, mask: int) -> set[Point]:
        return {p for p, lbl in self.assignment.items() if lbl == mask}

    def to_json(self, body: FiniteBody) -> dict:
        order = sorted(body.points)
        return {
            "assignment": {
                str(i): mask_label(self.assignment[p]) for i, p in enumerate(order)
            }
        }


def _max_count(bits: float) -> int:
    """Largest part-projection cardinality within a budget of `bits`.

    Consistent by construction with the verification test
    log2(count) <= bits + FLOAT_TOL.
    """
    if bits > 900:
        return 1 << 1000  # effectively unbounded
    cap = max(0, int(2.0 ** (bits + FLOAT_TOL)))
    while math.log2(cap + 1) <= bits + FLOAT_TOL:
        cap += 1
    while cap > 0 and math.log2(cap) > bits + FLOAT_TOL:
        cap -= 1
    return cap


def verify_split(body: FiniteBody, spec: SplitSpec, result: SplitResult) -> bool:
    """Direct-counting recheck that the split satisfies every budget.

    Structural problems (not a partition of the body, unknown part
    label) raise; budget failure returns False.  The empty part is
    vacuously within budget — log2 of an empty projection is -inf.
    """
    if set(result.assignment) != body.points:
        raise ValueError("assignment does not cover exactly the body's points")
    for point, mask in result.assignment.items():
        if mask not in spec.levels:
            raise ValueError(f"point {point} assigned to unknown part {mask}")
    for mask in spec.levels:
        shadow = {_proj(p, mask) for p, lbl in result.assignment.items()
                  if lbl == mask}
        if shadow and math.log2(len(shadow)) > spec.bits(mask) + FLOAT_TOL:
            return False
    return True


def find_split_exhaustive(body: FiniteBody, spec: SplitSpec) -> SplitResult | None:
    """Complete backtracking search over all point-to-part assignments.

    Deterministic: points in sorted order, parts in ascending mask
    order, so the returned split is the lexicographically first valid
    assignment.  A part's projection count never shrinks as points are
    added, so pruning an over-budget prefix is safe.  Raises
    ExhaustiveBoundExceeded when |parts| ** |S| > EXHAUSTIVE_BOUND.
    """
    parts = sorted(spec.levels)
    points = sorted(body.points)
    if len(parts) ** len(points) > EXHAUSTIVE_BOUND:
        raise ExhaustiveBoundExceeded(
            f"{len(parts)}**{len(points)} assignments exceed {EXHAUSTIVE_BOUND}"
        )
    caps = {mask: _max_count(spec.bits(mask)) for mask in parts}
    shadows: dict[int, set[Point]] = {mask: set() for mask in parts}
    chosen: list[int] = []

    def dfs(i: int) -> bool:
        if i == len(points):
            return True
        for mask in parts:
            key = _proj(points[i], mask)
            shadow = shadows[mask]
            fresh = key not in shadow
            if fresh and len(shadow) >= caps[mask]:
                continue
            if fresh:
                shadow.add(key)
            chosen.append(mask)
            if dfs(i + 1):
                return True
            chosen.pop()
            if fresh:
                shadow.remove(key)
        return False

    if not dfs(0):
        return None
    result = SplitResult(dict(zip(points, chosen)))
    if not verify_split(body, spec, result):
        raise AssertionError("exhaustive search produced an invalid split")
    return result


def find_split_greedy(body: FiniteBody, spec: SplitSpec) -> SplitResult | None:
    """One-pass heuristic: each point goes to the part it strains least.

    Strain is judged by marginal projection growth (does the point add a
    new shadow element?) with remaining budget capacity as tie-breaker,
    then ascending part order.  The result is verified before being
    returned; None means the heuristic failed, *not* that no split
    exists.
    """
    parts = sorted(spec.levels)
    caps = {mask: _max_count(spec.bits(mask)) for mask in parts}
    shadows: dict[int, set[Point]] = {mask: set() for mask in parts}
    assignment: dict[Point, int] = {}
    for point in sorted(body.points):
        best = None
        best_key = None
        for mask in parts:
            key = _proj(point, mask)
            growth = 0 if key in shadows[mask] else 1
            headroom = caps[mask] - (len(shadows[mask]) + growth)
            rank = (growth, -headroom, mask)
            if best_key is None or rank < best_key:
                best_key = rank
                best = mask
        shadows[best].add(_proj(point, best))
        assignment[point] = best
    result = SplitResult(assignment)
    return result if verify_split(body, spec, result) else None
