"""
Exact rational feasibility solver for  A y = b,  y >= 0.

Phase-1 simplex over fractions.Fraction with Bland's rule (smallest-index
entering column, smallest basic index on ratio ties), which rules out
cycling.  Problem sizes here are tiny — at most a few hundred columns —
so no effort goes into sparse representations or revised-simplex tricks;
what matters is that every number is exact.

Outcome is two-sided:

* feasible: a solution vector y >= 0 with A y = b, and
* infeasible: a Farkas vector u with u . A_col_j <= 0 for every column j
  and u . b > 0, certifying that no nonnegative solution exists.

Both certificates are rechecked exactly before being returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import MAX_PRODUCT_BITS, SizeLimitError

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True)
class FeasibilityResult:
    feasible: bool
    solution: tuple[Fraction, ...] | None  # y with A y = b, if feasible
    farkas: tuple[Fraction, ...] | None  # u with uA <= 0, u.b > 0, if not


def _pivot(
    rows: list[list[Fraction]],
    obj: list[Fraction],
    basis: list[int],
    r: int,
    c: int,
) -> None:
    piv = rows[r][c]
    rows[r] = [x / piv for x in rows[r]]
    prow = rows[r]
    for i, row in enumerate(rows):
        if i != r and row[c] != 0:
            f = row[c]
            rows[i] = [x - f * p for x, p in zip(row, prow)]
    if obj[c] != 0:
        f = obj[c]
        obj[:] = [x - f * p for x, p in zip(obj, prow)]
    basis[r] = c


def _check_size(rows: list[list[Fraction]]) -> None:
    for row in rows:
        for x in row:
            bits = max(x.numerator.bit_length(), x.denominator.bit_length())
            if bits > MAX_PRODUCT_BITS:
                raise SizeLimitError(
                    f"simplex tableau entry exceeds {MAX_PRODUCT_BITS} bits"
                )


def solve_eq_nonneg(
    a: Sequence[Sequence[Fraction]], b: Sequence[Fraction]
) -> FeasibilityResult:
    """Find y >= 0 with A y = b, or a Farkas certificate that none exists."""
    n = len(a)
    k = len(a[0]) if n else 0
    if any(len(row) != k for row in a):
        raise ValueError("ragged constraint matrix")
    if len(b) != n:
        raise ValueError(f"rhs length {len(b)} does not match {n} rows")

    # sign-normalize rows so the rhs is nonnegative, then append one
    # artificial column per row; initial basis = artificials
    signs = [1 if Fraction(bi) >= 0 else -1 for bi in b]
    rows: list[list[Fraction]] = []
    for i in range(n):
        s = signs[i]
        row = [s * Fraction(x) for x in a[i]]
        row += [_ONE if j == i else _ZERO for j in range(n)]
        row.append(s * Fraction(b[i]))
        rows.append(row)
    basis = [k + i for i in range(n)]

    # phase-1 objective: minimize the sum of artificials.  obj holds the
    # reduced costs (cost 0 structural, 1 artificial) followed by -z.
    obj = [_ZERO] * (k + n + 1)
    for j in range(k):
        obj[j] = -sum(rows[i][j] for i in range(n))
    obj[-1] = -sum(rows[i][-1] for i in range(n))

    ncols = k + n
    while True:
        enter = next((j for j in range(ncols) if obj[j] < 0), None)
        if enter is None:
            break
        leave = -1
        best: Fraction | None = None
        for i in range(n):
            coef = rows[i][enter]
            if coef > 0:
                ratio = rows[i][-1] / coef
                if best is None or ratio < best or (
                    ratio == best and basis[i] < basis[leave]
                ):
                    best, leave = ratio, i
        if leave < 0:
            raise AssertionError("phase-1 objective cannot be unbounded")
        _pivot(rows, obj, basis, leave, enter)
        _check_size(rows)

    z = -obj[-1]
    if z == 0:
        y = [_ZERO] * k
        for i, var in enumerate(basis):
            if var < k:
                y[var] = rows[i][-1]
        for i in range(n):
            total = sum(Fraction(a[i][j]) * y[j] for j in range(k))
            if total != Fraction(b[i]):
                raise AssertionError("simplex returned an invalid solution")
        return FeasibilityResult(True, tuple(y), None)

    # infeasible: simplex multipliers pi_i = 1 - reduced cost of the
    # i-th artificial; undo the row sign flips to get the Farkas vector
    u = [signs[i] * (1 - obj[k + i]) for i in range(n)]
    for j in range(k):
        if sum(u[i] * Fraction(a[i][j]) for i in range(n)) > 0:
            raise AssertionError("simplex produced an invalid Farkas vector")
    if sum(u[i] * Fraction(b[i]) for i in range(n)) <= 0:
        raise AssertionError("simplex produced an invalid Farkas vector")
    return FeasibilityResult(False, None, tuple(u))
