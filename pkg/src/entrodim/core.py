"""
Exact building blocks for linear entropy inequalities.

Conventions used throughout the package:

* A collection of m variables is indexed by positions 1..m.  A nonempty
  subset of positions is a *bitmask*: position i corresponds to bit i-1,
  so masks run over 1 .. 2**m - 1 and "ascending bitmask order" is plain
  integer order.  E.g. for variables (x, y, z) the mask 0b101 = 5 means
  the pair {x, z}.
* All entropies and slacks are measured in bits (base-2 logarithms).
* Exact values that are integer combinations of logarithms are carried
  symbolically by :class:`ExactLogLin`; their signs are decided by
  big-integer product comparison, never by floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

MAX_VARIABLES = 8

#: floats within this of zero are treated as zero in float-mode checks
FLOAT_TOL = 1e-9

#: abort exact product comparisons once an operand would exceed this many bits
MAX_PRODUCT_BITS = 1 << 24

RationalLike = Union[int, Fraction]


class SizeLimitError(ArithmeticError):
    """An exact computation would exceed the configured bit-size budget."""


class LogLinOverflowError(SizeLimitError):
    """An exact product comparison would exceed the bit-size budget."""


def subsets(m: int) -> list[int]:
    """All 2**m - 1 nonempty subset masks of {1..m}, ascending."""
    if not 1 <= m <= MAX_VARIABLES:
        raise ValueError(f"variable count must be in 1..{MAX_VARIABLES}, got {m}")
    return list(range(1, 1 << m))


def mask_of(positions: Iterable[int], m: int | None = None) -> int:
    """Bitmask for a collection of 1-based variable positions."""
    mask = 0
    for p in positions:
        if p < 1 or (m is not None and p > m):
            raise ValueError(f"variable position {p} out of range")
        mask |= 1 << (p - 1)
    return mask


def mask_positions(mask: int) -> tuple[int, ...]:
    """1-based variable positions present in a subset mask, ascending."""
    return tuple(i + 1 for i in range(mask.bit_length()) if mask >> i & 1)


def mask_label(mask: int, names: tuple[str, ...] | None = None) -> str:
    """Human-readable subset label, e.g. "{1,3}" or "x,z" with names."""
    pos = mask_positions(mask)
    if names is None:
        return "{" + ",".join(str(p) for p in pos) + "}"
    return ",".join(names[p - 1] for p in pos)


def _as_fraction(q: RationalLike) -> Fraction:
    if isinstance(q, Fraction):
        return q
    if isinstance(q, int):
        return Fraction(q)
    raise TypeError(f"expected an exact rational, got {type(q).__name__}")


@dataclass(frozen=True)
class ExactLogLin:
    """A formal sum sum_i q_i * log(n_i) with rational q_i and integer n_i >= 1.

    Terms are normalized on construction: arguments n = 1 are dropped,
    terms with equal n are merged, zero coefficients are dropped, and
    terms are sorted by n.  The represented real number is rendered in
    bits (sum q_i * log2(n_i)) by :meth:`to_float`; its exact sign comes
    from :func:`loglin_sign`.
    """

    terms: tuple[tuple[Fraction, int], ...]

    def __post_init__(self) -> None:
        merged: dict[int, Fraction] = {}
        for q, n in self.terms:
            if not isinstance(n, int) or n < 1:
                raise ValueError(f"log argument must be a positive integer, got {n!r}")
            q = _as_fraction(q)
            if n == 1 or q == 0:
                continue
            merged[n] = merged.get(n, Fraction(0)) + q
        norm = tuple((q, n) for n, q in sorted(merged.items()) if q != 0)
        object.__setattr__(self, "terms", norm)

    @classmethod
    def zero(cls) -> "ExactLogLin":
        return cls(())

    @classmethod
    def log2(cls, n: int) -> "ExactLogLin":
        """The value log2(n) bits."""
        return cls(((Fraction(1), n),))

    @classmethod
    def bits(cls, q: RationalLike) -> "ExactLogLin":
        """An exact rational number of bits, encoded as q * log2(2)."""
        return cls(((_as_fraction(q), 2),))

    def __add__(self, other: "ExactLogLin") -> "ExactLogLin":
        return ExactLogLin(self.terms + other.terms)

    def __neg__(self) -> "ExactLogLin":
        return ExactLogLin(tuple((-q, n) for q, n in self.terms))

    def __sub__(self, other: "ExactLogLin") -> "ExactLogLin":
        return self + (-other)

    def __mul__(self, scalar: RationalLike) -> "ExactLogLin":
        s = _as_fraction(scalar)
        return ExactLogLin(tuple((q * s, n) for q, n in self.terms))

    __rmul__ = __mul__

    def sign(self) -> int:
        return loglin_sign(self)

    def to_float(self) -> float:
        """Float rendering in bits."""
        return math.fsum(float(q) * math.log2(n) for q, n in self.terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        chunks = []
        for q, n in self.terms:
            mag = abs(q)
            if n == 2:
                body = str(mag)
            elif mag == 1:
                body = f"log2({n})"
            else:
                body = f"{mag}*log2({n})"
            chunks.append(("-" if q < 0 else "+", body))
        head_sign, head = chunks[0]
        out = head if head_sign == "+" else "-" + head
        for s, body in chunks[1:]:
            out += f" {s} {body}"
        return out


def _guarded_pow(n: int, e: int) -> int:
    # upper bound on bits of n**e; exponentiation by squaring never
    # produces an intermediate larger than the final square
    if e * n.bit_length() > MAX_PRODUCT_BITS:
        raise LogLinOverflowError(
            f"{n}**{e} may exceed {MAX_PRODUCT_BITS} bits; refusing exact comparison"
        )
    return n**e

def loglin_sign(x: ExactLogLin) -> int:
    """Exact sign of an ExactLogLin value: -1, 0 or +1.

    Denominators are cleared to integer exponents e_i, and the products
    prod_{e_i>0} n_i**e_i and prod_{e_i<0} n_i**-e_i are compared as big
    integers.  The result is independent of the logarithm base.
    """
    if not x.terms:
        return 0
    den = math.lcm(*(q.denominator for q, _ in x.terms))
    pos = neg = 1
    pos_bits = neg_bits = 0
    for q, n in x.terms:
        e = int(q * den)
        if e > 0:
            pos_bits += e * n.bit_length()
        else:
            neg_bits += -e * n.bit_length()
        if max(pos_bits, neg_bits) > MAX_PRODUCT_BITS:
            raise LogLinOverflowError(
                f"product comparison would exceed {MAX_PRODUCT_BITS} bits"
            )
        if e > 0:
            pos *= _guarded_pow(n, e)
        else:
            neg *= _guarded_pow(n, -e)
    if pos > neg:
        return 1
    if pos < neg:
        return -1
    return 0


def log2_compare(a: int, b: int) -> int:
    """Exact sign of log2(a) - log2(b) for positive integers.

    log2 is strictly increasing, so this is just the sign of a - b; it
    exists as a named operation so call sites comparing logarithmic
    quantities say what they mean (and agree with loglin_sign on
    ExactLogLin.log2(a) - ExactLogLin.log2(b), which tests check).
    """
    if a < 1 or b < 1:
        raise ValueError("log2_compare needs positive integers")
    return (a > b) - (a < b)


@dataclass(frozen=True)
class EntropyVector:
    """The 2**m - 1 joint entropies of an m-tuple, in bits.

    ``mode`` is "float" (values are floats, allowed down to -FLOAT_TOL to
    absorb rounding) or "exact" (values are nonnegative ExactLogLin).
    Instances are immutable values; the ``values`` dict must not be
    mutated after construction.
    """

    m: int
    mode: str
    values: Mapping[int, object]

    def __post_init__(self) -> None:
        expected = subsets(self.m)
        if set(self.values) != set(expected):
            raise ValueError(f"entropy vector needs exactly {len(expected)} entries")
        if self.mode == "float":
            for mask, v in self.values.items():
                if not v >= -FLOAT_TOL:
                    raise ValueError(
                        f"negative entropy {v} at subset {mask_label(mask)}"
                    )
        elif self.mode == "exact":
            for mask, v in self.values.items():
                if not isinstance(v, ExactLogLin):
                    raise ValueError("exact mode requires ExactLogLin values")
                if loglin_sign(v) < 0:
                    raise ValueError(
                        f"negative entropy {v} at subset {mask_label(mask)}"
                    )
        else:
            raise ValueError(f"unknown mode {self.mode!r}")

    @classmethod
    def from_floats(cls, m: int, values: Mapping[int, float]) -> "EntropyVector":
        return cls(m, "float", {k: float(v) for k, v in values.items()})

    @classmethod
    def from_exact(cls, m: int, values: Mapping[int, ExactLogLin]) -> "EntropyVector":
        return cls(m, "exact", dict(values))

    def __getitem__(self, mask: int):
        return self.values[mask]

    def to_floats(self) -> dict[int, float]:
        """Float rendering of the vector in bits, any mode."""
        if self.mode == "float":
            return {k: float(v) for k, v in self.values.items()}
        return {k: v.to_float() for k, v in self.values.items()}


@dataclass(frozen=True)
class LinearInequality:
    """A linear entropy inequality in canonical "sum_T c_T H(T) >= 0" form.

    The mapping ``coeffs`` holds only nonzero rational coefficients,
    keyed by subset mask.  The familiar two-sided reading splits the
    coefficients by sign: subsets with negative coefficient form the
    left-hand family (weights lhs_weights), positive ones the right-hand
    family (rhs_weights), and the inequality asserts

        sum_I lhs[I] * H(I)  <=  sum_J rhs[J] * H(J).
    """

    m: int
    coeffs: Mapping[int, Fraction]

    def __post_init__(self) -> None:
        valid = set(subsets(self.m))
        cleaned: dict[int, Fraction] = {}
        for mask, c in self.coeffs.items():
            if mask not in valid:
                raise ValueError(f"subset mask {mask} out of range for m={self.m}")
            c = _as_fraction(c)
            if c != 0:
                cleaned[mask] = c
        if not cleaned:
            raise ValueError("inequality has no nonzero coefficient")
        object.__setattr__(self, "coeffs", dict(sorted(cleaned.items())))

    def lhs_weights(self) -> dict[int, Fraction]:
        """Positive weights of the "<=" side (negated negative coefficients)."""
        return {mask: -c for mask, c in self.coeffs.items() if c < 0}

    def rhs_weights(self) -> dict[int, Fraction]:
        """Positive weights of the ">=" side."""
        return {mask: c for mask, c in self.coeffs.items() if c > 0}


def eval_slack(ineq: LinearInequality, v: EntropyVector):
    """Signed slack sum_T c_T * v[T]; negative means v violates ineq.

    Returns a float for float-mode vectors and an ExactLogLin for
    exact-mode vectors.
    """
    if ineq.m != v.m:
        raise ValueError(
            f"dimension mismatch: inequality has m={ineq.m}, vector m={v.m}"
        )
    if v.mode == "float":
        return math.fsum(float(c) * v.values[mask] for mask, c in ineq.coeffs.items())
    total = ExactLogLin.zero()
    for mask, c in ineq.coeffs.items():
        total = total + v.values[mask] * c
    return total
