"""Text syntax for forms: parser and canonical printer.

Grammar (the wedge token is ``/\\`` so ``^`` stays scalar exponentiation):

    form   := ["-"] term (("+" | "-") term)*
    term   := factor ("/\\" factor)*
    factor := atom ("*" atom)*
    atom   := NUMBER ["/" NUMBER] | VAR ["^" NUMBER] | BASIS | "(" form ")"
    VAR    := x<i> | y<i>          BASIS := dx<i> | dy<i>

A factor may contain at most one atom of positive form degree; scalar atoms
multiply into its polynomial coefficient.  The printer emits every term as
``(coefficient)*basis`` with a canonical ordering, and ``parse(print(f))``
returns a form equal to ``f`` exactly.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Optional

from .forms import Form, wedge
from .scalars import Poly, coordinate_name


class ParseError(ValueError):
    """Syntax or range error, carrying the source column."""

    def __init__(self, message: str, column: int):
        super().__init__(f"{message} (column {column + 1})")
        self.column = column


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z]+\d+)"
                    r"|(?P<wedge>/\\)|(?P<op>[-+*^/()]))")


def _tokenize(src: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(src):
        match = _TOKEN.match(src, pos)
        if match is None:
            if src[pos:].strip():
                raise ParseError(f"unrecognized input {src[pos:pos+8]!r}", pos)
            break
        pos = match.end()
        if match.group("num"):
            tokens.append(("num", match.group("num"), match.start("num")))
        elif match.group("name"):
            tokens.append(("name", match.group("name"), match.start("name")))
        elif match.group("wedge"):
            tokens.append(("op", "/\\", match.start("wedge")))
        else:
            tokens.append(("op", match.group("op"), match.start("op")))
    tokens.append(("end", "", len(src)))
    return tokens


class _Parser:
    def __init__(self, src: str, n: int):
        self.src = src
        self.n = n
        self.tokens = _tokenize(src)
        self.pos = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.pos]

    def next(self) -> tuple[str, str, int]:
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def expect_op(self, op: str) -> None:
        kind, value, col = self.next()
        if kind != "op" or value != op:
            raise ParseError(f"expected {op!r}, found {value or 'end of input'!r}", col)

    # form := ["-"] term (("+"|"-") term)*
    def parse_form(self) -> Form:
        negate = False
        kind, value, _ = self.peek()
        if kind == "op" and value == "-":
            self.next()
            negate = True
        total = self.parse_term()
        if negate:
            total = -total
        while True:
            kind, value, col = self.peek()
            if kind == "op" and value in "+-":
                self.next()
                term = self.parse_term()
                try:
                    total = total + term if value == "+" else total - term
                except ValueError:
                    raise ParseError("cannot add forms of different degree", col) from None
            else:
                return total

    # term := factor ("/\" factor)*
    def parse_term(self) -> Form:
        value = self.parse_factor()
        while True:
            kind, token, _ = self.peek()
            if kind == "op" and token == "/\\":
                self.next()
                value = wedge(value, self.parse_factor())
            else:
                return value

    # factor := atom ("*" atom)*
    def parse_factor(self) -> Form:
        scalar = Poly.const(self.n, 1)
        shaped: Optional[Form] = None
        while True:
            atom_col = self.peek()[2]
            atom = self.parse_atom()
            if atom.degree == 0:
                scalar = scalar * atom.terms.get((), Poly.zero(self.n))
            elif shaped is None:
                shaped = atom
            else:
                raise ParseError("two positive-degree factors joined by '*'; use '/\\'",
                                 atom_col)
            kind, token, _ = self.peek()
            if kind == "op" and token == "*":
                self.next()
                continue
            break
        if shaped is None:
            return Form.from_poly(scalar)
        return shaped.scaled(scalar)

    def parse_atom(self) -> Form:
        kind, value, col = self.next()
        if kind == "num":
            numerator = int(value)
            if self._peek_is_op("/"):
                self.next()
                dkind, dvalue, dcol = self.next()
                if dkind != "num":
                    raise ParseError("expected a denominator", dcol)
                return Form.const(self.n, Fraction(numerator, int(dvalue)))
            return Form.const(self.n, numerator)
        if kind == "name":
            return self._named_atom(value, col)
        if kind == "op" and value == "(":
            inner = self.parse_form()
            self.expect_op(")")
            return inner
        raise ParseError(f"unexpected {value or 'end of input'!r}", col)

    def _named_atom(self, name: str, col: int) -> Form:
        match = re.fullmatch(r"(dx|dy|x|y)(\d+)", name)
        if match is None:
            raise ParseError(f"unknown symbol {name!r}", col)
        head, index = match.group(1), int(match.group(2))
        if not 1 <= index <= self.n:
            raise ParseError(f"{name!r} out of range for chart dimension n={self.n}", col)
        if head == "dx":
            return Form.dx(self.n, index)
        if head == "dy":
            return Form.dy(self.n, index)
        coord = index - 1 if head == "x" else self.n + index - 1
        poly = Poly.variable(self.n, coord)
        if self._peek_is_op("^"):
            self.next()
            pkind, pvalue, pcol = self.next()
            if pkind != "num":
                raise ParseError("expected an integer exponent", pcol)
            poly = poly ** int(pvalue)
        return Form.from_poly(poly)

    def _peek_is_op(self, op: str) -> bool:
        kind, value, _ = self.peek()
        return kind == "op" and value == op


def parse_form(src: str, n: int) -> Form:
    """Parse a form expression on the chart of dimension n."""
    parser = _Parser(src, n)
    result = parser.parse_form()
    kind, value, col = parser.peek()
    if kind != "end":
        raise ParseError(f"trailing input {value!r}", col)
    return result


def parse_poly(src: str, n: int) -> Poly:
    form = parse_form(src, n)
    if form.degree != 0 and not form.is_zero:
        raise ParseError("expected a scalar expression", 0)
    return form.terms.get((), Poly.zero(n))


# ---------- printing ----------

def print_poly(poly: Poly) -> str:
    if poly.is_zero:
        return "0"
    bits: list[str] = []
    for mono in sorted(poly.terms, key=lambda m: (sum(m), m)):
        coeff = poly.terms[mono]
        factors = []
        magnitude = abs(coeff)
        if magnitude != 1 or not any(mono):
            factors.append(str(magnitude))
        for coord, exponent in enumerate(mono):
            if not exponent:
                continue
            name = coordinate_name(poly.n, coord)
            factors.append(f"{name}^{exponent}" if exponent > 1 else name)
        text = "*".join(factors)
        if not bits:
            bits.append(text if coeff > 0 else f"-{text}")
        else:
            bits.append(f" + {text}" if coeff > 0 else f" - {text}")
    return "".join(bits)


def _basis_name(n: int, idx: tuple[int, ...]) -> str:
    parts = []
    for coord in idx:
        if coord < n:
            parts.append(f"dx{coord + 1}")
        else:
            parts.append(f"dy{coord - n + 1}")
    return "/\\".join(parts)


def print_form(form: Form) -> str:
    """Canonical text of a form; parse(print(f), f.n) == f exactly."""
    if form.is_zero:
        return "0"
    if form.degree == 0:
        return print_poly(form.terms[()])
    chunks = []
    for idx in sorted(form.terms):
        poly = form.terms[idx]
        basis = _basis_name(form.n, idx)
        if poly == Poly.const(form.n, 1):
            chunks.append(basis)
        else:
            chunks.append(f"({print_poly(poly)})*{basis}")
    return " + ".join(chunks)
