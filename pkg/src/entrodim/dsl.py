"""
Text front end for entropy inequalities.

Grammar (whitespace-insensitive, ``*`` optional after a coefficient):

    ineq     :=  expr ("<=" | ">=") expr
    expr     :=  term (("+" | "-") term)*
    term     :=  rational | [rational "*"?] atom
    atom     :=  "H(" vars ")" | "H(" vars "|" vars ")"
              |  "I(" vars ";" vars ["|" vars] ")"
    vars     :=  name ("," name)*
    rational :=  digits | digits "/" digits

A bare rational term must be the literal zero (entropy inequalities are
homogeneous, so a nonzero constant is rejected); it contributes nothing
and exists so that forms like "I(x;y) >= 0" parse.

Conditional entropy and mutual information are sugar:

    H(A|B)   = H(A,B) - H(B)
    I(A;B)   = H(A) + H(B) - H(A,B)
    I(A;B|C) = H(A,C) + H(B,C) - H(A,B,C) - H(C)

Variables bind to positions 1..m in order of first appearance, unless an
explicit ordered name list is supplied.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Sequence

from .core import LinearInequality, mask_positions

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_]\w*)|(?P<op><=|>=|[-+*/(),;|]))"
)


class InequalityParseError(ValueError):
    """Syntax or binding error, carrying the source position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class ZeroInequalityError(ValueError):
    """All coefficients cancelled; the inequality says nothing."""


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            if text[pos:].strip() == "":
                break
            bad = len(text) - len(text[pos:].lstrip())
            raise InequalityParseError(f"unexpected character {text[bad]!r}", bad)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, declared_vars: Sequence[str] | None):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.names: list[str] = list(declared_vars) if declared_vars else []
        if declared_vars is not None and len(set(self.names)) != len(self.names):
            raise ValueError("declared variable names must be distinct")
        self.declared = declared_vars is not None

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, text, pos = self.next()
        if text != value:
            raise InequalityParseError(f"expected {value!r}, found {text or 'end of input'!r}", pos)

    def fail(self, message: str):
        raise InequalityParseError(message, self.peek()[2])

    def var_mask(self, name: str, pos: int) -> int:
        if name not in self.names:
            if self.declared:
                raise InequalityParseError(f"unknown variable {name!r}", pos)
            self.names.append(name)
        return 1 << self.names.index(name)

    def parse_vars(self) -> int:
        mask = 0
        while True:
            kind, text, pos = self.next()
            if kind != "name":
                raise InequalityParseError(
                    f"expected a variable name, found {text or 'end of input'!r}", pos
                )
            mask |= self.var_mask(text, pos)
            if self.peek()[1] != ",":
                return mask
            self.next()

    def parse_rational(self) -> Fraction:
        kind, text, pos = self.next()
        assert kind == "num"
        value = Fraction(int(text))
        if self.peek()[1] == "/":
            self.next()
            kind, dtext, dpos = self.next()
            if kind != "num":
                raise InequalityParseError("expected denominator digits", dpos)
            if int(dtext) == 0:
                raise InequalityParseError("zero denominator", dpos)
            value /= int(dtext)
        return value

    def parse_atom(self) -> dict[int, Fraction]:
        kind, text, pos = self.next()
        if kind != "name" or text not in ("H", "I") or self.peek()[1] != "(":
            raise InequalityParseError(
                f"expected H(...) or I(...), found {text or 'end of input'!r}", pos
            )
        func = text
        self.expect("(")
        if self.peek()[1] == ")":
            raise InequalityParseError(f"empty {func}()", self.peek()[2])
        a = self.parse_vars()
        if func == "H":
            if self.peek()[1] == "|":
                self.next()
                b = self.parse_vars()
                self.expect(")")
                return _merge({a | b: Fraction(1)}, {b: Fraction(-1)})
            self.expect(")")
            return {a: Fraction(1)}
        self.expect(";")
        b = self.parse_vars()
        if self.peek()[1] == "|":
            self.next()
            c = self.parse_vars()
            self.expect(")")
            return _merge(
                {a | c: Fraction(1)},
                {b | c: Fraction(1)},
                {a | b | c: Fraction(-1)},
                {c: Fraction(-1)},
            )
        self.expect(")")
        return _merge({a: Fraction(1)}, {b: Fraction(1)}, {a | b: Fraction(-1)})

    def parse_term(self) -> dict[int, Fraction]:
        coeff = Fraction(1)
        if self.peek()[0] == "num":
            num_pos = self.peek()[2]
            coeff = self.parse_rational()
            if self.peek()[1] == "*":
                self.next()
            elif self.peek()[0] != "name":
                # bare rational term: only the literal zero is meaningful
                if coeff != 0:
                    raise InequalityParseError("nonzero constant term", num_pos)
                return {}
        atom = self.parse_atom()
        return {mask: coeff * c for mask, c in atom.items()}

    def parse_expr(self) -> dict[int, Fraction]:
        total = self.parse_term()
        while self.peek()[1] in ("+", "-"):
            sign = Fraction(1) if self.next()[1] == "+" else Fraction(-1)
            term = self.parse_term()
            total = _merge(total, {m: sign * c for m, c in term.items()})
        return total

    def parse(self) -> tuple[LinearInequality, tuple[str, ...]]:
        lhs = self.parse_expr()
        kind, rel, pos = self.next()
        if rel not in ("<=", ">="):
            raise InequalityParseError(
                f"expected '<=' or '>=', found {rel or 'end of input'!r}", pos
            )
        rhs = self.parse_expr()
        kind, text, pos = self.peek()
        if kind != "end":
            raise InequalityParseError(f"trailing input {text!r}", pos)
        if rel == "<=":
            coeffs = _merge(rhs, {m: -c for m, c in lhs.items()})
        else:
            coeffs = _merge(lhs, {m: -c for m, c in rhs.items()})
        coeffs = {m: c for m, c in coeffs.items() if c != 0}
        if not coeffs:
            raise ZeroInequalityError("all coefficients cancel; inequality is 0 >= 0")
        if not self.names:
            raise InequalityParseError("no variables", 0)
        return LinearInequality(len(self.names), coeffs), tuple(self.names)


def _merge(*maps: dict[int, Fraction]) -> dict[int, Fraction]:
    out: dict[int, Fraction] = {}
    for m in maps:
        for mask, c in m.items():
            out[mask] = out.get(mask, Fraction(0)) + c
    return out


def parse_with_names(
    text: str, declared_vars: Sequence[str] | None = None
) -> tuple[LinearInequality, tuple[str, ...]]:
    """Parse inequality text; also return the position->name binding."""
    return _Parser(text, declared_vars).parse()


def parse_inequality(
    text: str, declared_vars: Sequence[str] | None = None
) -> LinearInequality:
    """Parse inequality text into canonical "sum c_T H(T) >= 0" form."""
    return parse_with_names(text, declared_vars)[0]


def _render_side(weights: dict[int, Fraction], names: Sequence[str]) -> str:
    if not weights:
        return "0"
    parts = []
    for mask in sorted(weights):
        vars_txt = ",".join(names[p - 1] for p in mask_positions(mask))
        parts.append(f"{weights[mask]} H({vars_txt})")
    return " + ".join(parts)


def format_inequality(ineq: LinearInequality, names: Sequence[str]) -> str:
    """Render the split two-sided form "sum a_I H(I) <= sum b_J H(J)".

    All coefficients are printed as positive rationals; a side with no
    terms is rendered as "0".  parse_inequality(format_inequality(q, ns),
    ns) reproduces q exactly.
    """
    if len(names) != ineq.m:
        raise ValueError(f"need {ineq.m} variable names, got {len(names)}")
    if len(set(names)) != len(names):
        raise ValueError("variable names must be distinct")
    return (
        _render_side(ineq.lhs_weights(), names)
        + " <= "
        + _render_side(ineq.rhs_weights(), names)
    )
