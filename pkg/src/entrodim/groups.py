"""
Finite groups, subgroups, and the entropy points their cosets realize.

A uniform random group element g together with subgroups H_1..H_m gives
jointly distributed coset variables g_i = gH_i; the joint entropy of any
subtuple is exact:

    H(g_I) = log2(#G) - log2(#H_I),   H_I = intersection of H_i, i in I.

The same data yields an explicit finite witness set
A = {(gH_1, ..., gH_m) : g in G} whose projections all have uniform
fibers, so `distributions.exact_entropy_vector` recomputes the same
vector by brute-force counting — the module's central cross-check.

Groups are Cayley tables over element indices 0..n-1 with the identity
pinned at index 0; every table is fully validated (identity, inverses,
associativity) at construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import permutations, product

from .core import (
    EntropyVector,
    ExactLogLin,
    LinearInequality,
    eval_slack,
    subsets,
)
from .distributions import SupportSet, exact_entropy_vector


class GroupTableError(ValueError):
    """The offered Cayley table is not a group (or not in canonical form)."""


class NoIdentity(GroupTableError):
    def __init__(self):
        super().__init__("index 0 is not a two-sided identity")


class NoInverse(GroupTableError):
    def __init__(self, a: int):
        super().__init__(f"element {a} has no two-sided inverse")
        self.element = a


class NotAssociative(GroupTableError):
    def __init__(self, a: int, b: int, c: int):
        super().__init__(f"associativity fails at ({a}, {b}, {c})")
        self.triple = (a, b, c)


@dataclass(frozen=True)
class FiniteGroup:
    """A finite group as a validated Cayley table, identity at index 0."""

    order: int
    table: tuple[tuple[int, ...], ...]
    name: str = ""

    def __post_init__(self):
        n = self.order
        tab = tuple(tuple(row) for row in self.table)
        object.__setattr__(self, "table", tab)
        if n < 1 or len(tab) != n or any(len(row) != n for row in tab):
            raise GroupTableError(f"table is not {n}x{n}")
        for row in tab:
            for x in row:
                if not 0 <= x < n:
                    raise GroupTableError(f"table entry {x} out of range 0..{n - 1}")
        if any(tab[0][j] != j or tab[j][0] != j for j in range(n)):
            raise NoIdentity()
        for a in range(n):
            if not any(tab[a][b] == 0 and tab[b][a] == 0 for b in range(n)):
                raise NoInverse(a)
        for a in range(n):
            ra = tab[a]
            for b in range(n):
                ab = ra[b]
                rb = tab[b]
                tab_ab = tab[ab]
                for c in range(n):
                    if tab_ab[c] != ra[rb[c]]:
                        raise NotAssociative(a, b, c)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    @cached_property
    def inverses(self) -> tuple[int, ...]:
        inv = [0] * self.order
        for a in range(self.order):
            inv[a] = self.table[a].index(0)
        return tuple(inv)

    def __repr__(self):
        label = self.name or f"order {self.order}"
        return f"FiniteGroup({label})"

    @classmethod
    def from_json(cls, obj: dict) -> "FiniteGroup":
        if "table" in obj:
            table = tuple(tuple(row) for row in obj["table"])
            return cls(int(obj.get("order", len(table))), table,
                       obj.get("name", ""))
        if "generators" in obj:
            return from_permutations(
                int(obj["perm_degree"]),
                [tuple(g) for g in obj["generators"]],
                name=obj.get("name", ""),
            )
        raise ValueError("group JSON needs either 'table' or 'generators'")

    def to_json(self) -> dict:
        out = {"order": self.order, "table": [list(row) for row in self.table]}
        if self.name:
            out["name"] = self.name
        return out


@dataclass(frozen=True)
class Subgroup:
    """Sorted element indices of a subgroup of some FiniteGroup.

    Construction does not see the parent table; use
    subgroup_from_elements / subgroup_from_generators for validated
    construction.
    """

    elements: tuple[int, ...]

    def __post_init__(self):
        elems = tuple(sorted(set(self.elements)))
        if not elems or elems[0] != 0:
            raise ValueError("a subgroup must contain the identity (index 0)")
        object.__setattr__(self, "elements", elems)

    @cached_property
    def element_set(self) -> frozenset[int]:
        return frozenset(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)


def group_from_table(table) -> FiniteGroup:
    """Validate a Cayley table; errors name the violated group axiom."""
    rows = tuple(tuple(row) for row in table)
    return FiniteGroup(len(rows), rows)


def subgroup_from_elements(g: FiniteGroup, elements) -> Subgroup:
    """Validate that the given element indices form a subgroup of g."""
    elems = sorted(set(elements))
    for a in elems:
        if not 0 <= a < g.order:
            raise ValueError(f"element index {a} out of range")
    sub = set(elems)
    if 0 not in sub:
        raise ValueError("subgroup must contain the identity")
    for a in elems:
        if g.inverses[a] not in sub:
            raise ValueError(f"subgroup not closed under inverse of {a}")
        for b in elems:
            if g.table[a][b] not in sub:
                raise ValueError(f"subgroup not closed under product {a}*{b}")
    return Subgroup(tuple(elems))


def subgroup_from_generators(g: FiniteGroup, gens) -> Subgroup:
    """Closure of the generators; always a valid subgroup (empty -> {e})."""
    for a in gens:
        if not 0 <= a < g.order:
            raise ValueError(f"generator index {a} out of range")
    closure = {0}
    frontier = [0]
    gens = list(gens)
    table = g.table
    while frontier:
        a = frontier.pop()
        for b in gens:
            for prod_ in (table[a][b], table[b][a]):
                if prod_ not in closure:
                    closure.add(prod_)
                    frontier.append(prod_)
    # generated set is closed under product with generators and contains
    # e, hence is closed and inverse-closed (finite group)
    return Subgroup(tuple(sorted(closure)))


def intersect(g: FiniteGroup, subgroups) -> Subgroup:
    """Intersection of subgroups of g (itself always a subgroup)."""
    subs = list(subgroups)
    if not subs:
        return Subgroup(tuple(range(g.order)))
    common = subs[0].element_set
    for h in subs[1:]:
        common &= h.element_set
    return Subgroup(tuple(sorted(common)))


def all_subgroups(g: FiniteGroup, max_generators: int = 2) -> list[Subgroup]:
    """Subgroups generated by at most max_generators elements, deduplicated.

    This is deliberately not the full subgroup lattice: for groups whose
    subgroups all need few generators (cyclic, dihedral, symmetric up to
    S4...) it is complete, elsewhere it is a systematic sample.  Sorted
    by (order, elements) for deterministic scans.
    """
    seen: set[tuple[int, ...]] = set()
    seen.add(subgroup_from_generators(g, ()).elements)
    singles = []
    for a in range(1, g.order):
        sub = subgroup_from_generators(g, (a,))
        singles.append(sub.elements)
        seen.add(sub.elements)
    if max_generators >= 2:
        for a in range(1, g.order):
            for b in range(a + 1, g.order):
                seen.add(subgroup_from_generators(g, (a, b)).elements)
    return sorted((Subgroup(e) for e in seen), key=lambda s: (s.order, s.elements))


# ---------------------------------------------------------------------------
# constructors and the built-in catalog


def cyclic(n: int, name: str = "") -> FiniteGroup:
    table = tuple(tuple((i + j) % n for j in range(n)) for i in range(n))
    return FiniteGroup(n, table, name or f"Z{n}")


def direct_product(*groups: FiniteGroup, name: str = "") -> FiniteGroup:
    if not groups:
        raise ValueError("direct product needs at least one factor")
    order = 1
    for g in groups:
        order *= g.order
    # element index = mixed-radix encoding of per-factor indices
    radices = [g.order for g in groups]

    def encode(coords):
        idx = 0
        for r, c in zip(radices, coords):
            idx = idx * r + c
        return idx

    coords = list(product(*(range(r) for r in radices)))
    table = []
    for xs in coords:
        row = []
        for ys in coords:
            row.append(encode([g.table[x][y] for g, x, y in zip(groups, xs, ys)]))
        table.append(tuple(row))
    default = "x".join(g.name or f"?{g.order}" for g in groups)
    return FiniteGroup(order, tuple(table), name or default)


def dihedral(n: int, name: str = "") -> FiniteGroup:
    """Symmetries of the regular n-gon, order 2n.

    Element s*n + r is "rotate by r, then flip s times"; the product rule
    is (r1,s1)(r2,s2) = (r1 + (-1)^s1 * r2, s1 xor s2) and the identity
    (0,0) lands at index 0.
    """
    if n < 1:
        raise ValueError("dihedral index must be >= 1")
    elems = [(r, s) for s in (0, 1) for r in range(n)]
    lookup = {e: i for i, e in enumerate(elems)}
    tab = [[0] * (2 * n) for _ in range(2 * n)]
    for r1, s1 in elems:
        for r2, s2 in elems:
            r = (r1 + (r2 if s1 == 0 else -r2)) % n
            tab[lookup[(r1, s1)]][lookup[(r2, s2)]] = lookup[(r, s1 ^ s2)]
    return FiniteGroup(2 * n, tuple(tuple(row) for row in tab), name or f"D{n}")


def from_permutations(degree: int, generators, name: str = "") -> FiniteGroup:
    """Group generated by permutations (tuples mapping i -> p[i]) of 0..degree-1."""
    identity = tuple(range(degree))
    for p in generators:
        if tuple(sorted(p)) != identity:
            raise ValueError(f"{p} is not a permutation of 0..{degree - 1}")
    gens = [tuple(p) for p in generators]
    elems = {identity}
    frontier = [identity]
    while frontier:
        p = frontier.pop()
        for q in gens:
            for r in (
                tuple(p[q[i]] for i in range(degree)),
                tuple(q[p[i]] for i in range(degree)),
            ):
                if r not in elems:
                    elems.add(r)
                    frontier.append(r)
    ordered = [identity] + sorted(elems - {identity})
    index = {p: i for i, p in enumerate(ordered)}
    table = tuple(
        tuple(index[tuple(p[q[i]] for i in range(degree))] for q in ordered)
        for p in ordered
    )
    return FiniteGroup(len(ordered), table, name)


def symmetric(n: int, name: str = "") -> FiniteGroup:
    if not 1 <= n <= 5:
        raise ValueError("symmetric groups supported for n in 1..5")
    ordered = list(permutations(range(n)))  # identity is lexicographically first
    index = {p: i for i, p in enumerate(ordered)}
    table = tuple(
        tuple(index[tuple(p[q[i]] for i in range(n))] for q in ordered)
        for p in ordered
    )
    return FiniteGroup(len(ordered), table, name or f"S{n}")


def builtin_catalog(max_order: int = 24) -> list[FiniteGroup]:
    """Deterministic catalog: cyclics, products of 2-3 cyclics, dihedral,
    symmetric — everything of order <= max_order, sorted by (order, name).

    The catalog is a search space, not a classification: isomorphic
    groups may appear under different constructions.
    """
    groups: list[FiniteGroup] = []
    for n in range(1, min(64, max_order) + 1):
        groups.append(cyclic(n))
    for a in range(2, max_order + 1):
        for b in range(a, max_order // a + 1):
            groups.append(direct_product(cyclic(a), cyclic(b)))
            for c in range(b, max_order // (a * b) + 1):
                groups.append(direct_product(cyclic(a), cyclic(b), cyclic(c)))
    for n in range(3, 13):
        if 2 * n <= max_order:
            groups.append(dihedral(n))
    for n in range(3, 6):
        order = 1
        for k in range(2, n + 1):
            order *= k
        if order <= max_order:
            groups.append(symmetric(n))
    return sorted(groups, key=lambda g: (g.order, g.name))


# ---------------------------------------------------------------------------
# coset entropy points


@dataclass(frozen=True)
class GroupEntropyPoint:
    """Exact entropy vector of the coset variables of (G, H_1..H_m)."""

    m: int
    vector: EntropyVector


def coset_index_map(g: FiniteGroup, h: Subgroup) -> tuple[int, ...]:
    """Index of each element's left coset aH, cosets numbered 0,1,... in
    order of least representative.  Memoized per (group, subgroup)."""
    cache = g.__dict__.setdefault("_coset_maps", {})
    got = cache.get(h.elements)
    if got is not None:
        return got
    idx = [-1] * g.order
    nxt = 0
    table = g.table
    for a in range(g.order):
        if idx[a] < 0:
            for x in h.elements:
                idx[table[a][x]] = nxt
            nxt += 1
    out = tuple(idx)
    cache[h.elements] = out
    return out


def witness_set(g: FiniteGroup, subgroups) -> SupportSet:
    """The finite set A = {(gH_1, ..., gH_m) : g in G} of coset tuples."""
    subs = list(subgroups)
    maps = [coset_index_map(g, h) for h in subs]
    points = {tuple(mp[a] for mp in maps) for a in range(g.order)}
    return SupportSet(len(subs), frozenset(points))


def coset_entropy_point(
    g: FiniteGroup, subgroups, cross_validate: bool = True
) -> GroupEntropyPoint:
    """Entropy vector with values[I] = log2(#G) - log2(#H_I).

    With cross_validate (the default) the vector is recomputed
    independently by projection counting on the explicit witness set and
    the two must agree exactly.
    """
    subs = list(subgroups)
    m = len(subs)
    orders = _intersection_orders(g, subs)
    values = {
        mask: ExactLogLin.log2(g.order) - ExactLogLin.log2(orders[mask])
        for mask in subsets(m)
    }
    point = GroupEntropyPoint(m, EntropyVector.from_exact(m, values))
    if cross_validate:
        counted = exact_entropy_vector(witness_set(g, subs))
        for mask in subsets(m):
            if (point.vector[mask] - counted[mask]).sign() != 0:
                raise AssertionError(
                    f"coset entropies disagree with witness counting at {mask}"
                )
    return point


def _intersection_orders(g: FiniteGroup, subs) -> dict[int, int]:
    """#H_I for every nonempty I, via shared-prefix intersections."""
    m = len(subs)
    sets: dict[int, frozenset[int]] = {}
    orders: dict[int, int] = {}
    for mask in subsets(m):
        low = mask & -mask
        rest = mask ^ low
        if rest == 0:
            cur = subs[low.bit_length() - 1].element_set
        else:
            cur = sets[rest] & subs[low.bit_length() - 1].element_set
        sets[mask] = cur
        orders[mask] = len(cur)
    return orders


@dataclass(frozen=True)
class Violation:
    """First catalog point violating an inequality, with its exact slack."""

    group: FiniteGroup
    subgroups: tuple[Subgroup, ...]
    point: GroupEntropyPoint
    slack: ExactLogLin


def search_violation(
    ineq: LinearInequality,
    groups=None,
    max_order: int = 16,
    max_subgroups: int | None = None,
) -> Violation | None:
    """Scan (group, subgroup tuple) candidates for a violated inequality.

    Deterministic lexicographic scan: catalog order, then subgroup
    tuples ordered by the all_subgroups listing.  Returns the first
    tuple whose coset entropy point gives exactly negative slack, or
    None when the catalog is exhausted — which is *not* a proof that no
    counterexample exists, only that none was found within the catalog.
    """
    cat = list(groups) if groups is not None else builtin_catalog(max_order)
    if not cat:
        raise ValueError("empty group catalog")
    m = ineq.m
    items = sorted(ineq.coeffs.items())
    for g in cat:
        subs = all_subgroups(g)
        if max_subgroups is not None:
            subs = subs[:max_subgroups]
        n = g.order
        for tup in product(subs, repeat=m):
            orders = _intersection_orders(g, tup)
            # slack = sum c_T * log2(n / #H_T); sign via one exact
            # rational product: slack > 0 iff prod (n/#H_T)^(c_T) > 1
            prod_ = Fraction(1)
            for mask, c in items:
                base = Fraction(n, orders[mask])
                if c.denominator == 1:
                    prod_ *= base ** c.numerator
                else:
                    # fractional weights: defer to the exact loglin sign
                    prod_ = None
                    break
            if prod_ is None:
                point = coset_entropy_point(g, tup, cross_validate=False)
                negative = eval_slack(ineq, point.vector).sign() < 0
            else:
                negative = prod_ < 1
            if negative:
                point = coset_entropy_point(g, tup, cross_validate=True)
                slack = eval_slack(ineq, point.vector)
                if slack.sign() >= 0:
                    raise AssertionError("fast slack sign disagrees with exact")
                return Violation(g, tuple(tup), point, slack)
    return None


def subgroups_from_json(g: FiniteGroup, arrays) -> list[Subgroup]:
    return [subgroup_from_elements(g, arr) for arr in arrays]


def subgroups_to_json(subgroups) -> list[list[int]]:
    return [list(h.elements) for h in subgroups]
