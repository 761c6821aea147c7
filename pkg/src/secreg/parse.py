"""Text grammar for polynomials and ideal files.

    expr   := ('-')? term (('+'|'-') term)*
    term   := factor ('*'? factor)*
    factor := coefficient | var ('^' int)? | '(' expr ')'
    var    := letter alnum*
    coefficient := int ('/' int)?

Whitespace is insignificant.  Implicit multiplication is accepted ("s^4t"),
as is '**' for '^'; the '/' in coefficients supports rational round trips.
"""

from __future__ import annotations

from .field import QQ, field_of_characteristic
from .ring import GREVLEX, LEX, MonomialOrder, PolyRing, Polynomial, RingError


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at offset {position}")
        self.position = position


class _Tokens:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take_int(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            raise ParseError("expected integer", start)
        return int(self.text[start : self.pos])

    def take_name(self, known) -> str:
        """Longest prefix of the alnum run that is a declared variable.

        Declared-name matching keeps implicit products like "st^4" working
        alongside multi-character names like "x0".
        """
        self.skip_ws()
        start = self.pos
        if not (self.pos < len(self.text) and self.text[self.pos].isalpha()):
            raise ParseError("expected variable", start)
        end = self.pos + 1
        while end < len(self.text) and self.text[end].isalnum():
            end += 1
        token = self.text[start:end]
        for stop in range(len(token), 0, -1):
            if token[:stop] in known:
                self.pos = start + stop
                return token[:stop]
        raise ParseError(f"unknown variable {token!r}", start)


def parse_polynomial(text: str, ring: PolyRing) -> Polynomial:
    toks = _Tokens(text)
    poly = _parse_expr(toks, ring)
    toks.skip_ws()
    if toks.pos != len(text):
        raise ParseError(f"unexpected character {text[toks.pos]!r}", toks.pos)
    return poly


def _parse_expr(toks: _Tokens, ring: PolyRing) -> Polynomial:
    negate = False
    if toks.peek() == "-":
        toks.pos += 1
        negate = True
    poly = _parse_term(toks, ring)
    if negate:
        poly = -poly
    while True:
        ch = toks.peek()
        if ch == "+":
            toks.pos += 1
            poly = poly + _parse_term(toks, ring)
        elif ch == "-":
            toks.pos += 1
            poly = poly - _parse_term(toks, ring)
        else:
            return poly


def _parse_term(toks: _Tokens, ring: PolyRing) -> Polynomial:
    poly = _parse_factor(toks, ring)
    while True:
        ch = toks.peek()
        if ch == "*":
            toks.pos += 1
            if toks.peek() == "*":  # '**' exponent on the previous factor
                raise ParseError("misplaced '**'", toks.pos)
            poly = poly * _parse_factor(toks, ring)
        elif ch.isalnum() or ch == "(":
            poly = poly * _parse_factor(toks, ring)
        else:
            return poly


def _parse_factor(toks: _Tokens, ring: PolyRing) -> Polynomial:
    ch = toks.peek()
    if ch == "":
        raise ParseError("unexpected end of input", toks.pos)
    if ch == "(":
        toks.pos += 1
        poly = _parse_expr(toks, ring)
        if toks.peek() != ")":
            raise ParseError("expected ')'", toks.pos)
        toks.pos += 1
        return _maybe_power(toks, poly)
    if ch.isdigit():
        num = toks.take_int()
        if toks.peek() == "/":
            toks.pos += 1
            den = toks.take_int()
            if ring.field is QQ:
                from fractions import Fraction

                return ring.constant(Fraction(num, den))
            return ring.constant(num).scale(ring.field.inv(ring.field.normalize(den)))
        return _maybe_power(toks, ring.constant(num))
    if ch.isalpha():
        name = toks.take_name(ring.var_index)
        return _maybe_power(toks, ring.variable(name))
    raise ParseError(f"unexpected character {ch!r}", toks.pos)


def _maybe_power(toks: _Tokens, poly: Polynomial) -> Polynomial:
    ch = toks.peek()
    if ch == "^":
        toks.pos += 1
        return poly ** toks.take_int()
    if ch == "*" and toks.text[toks.pos + 1 : toks.pos + 2] == "*":
        toks.pos += 2
        return poly ** toks.take_int()
    return poly


def _order_from_token(token: str, nvars: int) -> MonomialOrder:
    if token == "grevlex":
        return GREVLEX
    if token == "lex":
        return LEX
    if token.startswith("block(") and token.endswith(")"):
        sizes = [int(s) for s in token[6:-1].split(",")]
        return MonomialOrder("block", [(s, "grevlex") for s in sizes])
    raise ParseError(f"unknown order {token!r}", 0)


def order_token(order: MonomialOrder) -> str:
    if order.kind == "block":
        return "block(" + ",".join(str(s) for s, _ in order.blocks) + ")"
    return order.kind


def parse_ideal_file(text: str):
    """Ideal text format: `ring <char> <var-list> <order>`, then one
    polynomial per non-empty line."""
    from .groebner import Ideal

    lines = text.splitlines()
    header = None
    polys = []
    ring = None
    for lineno, line in enumerate(lines):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if header is None:
            parts = stripped.split()
            if len(parts) != 4 or parts[0] != "ring":
                raise ParseError("expected 'ring <char> <vars> <order>'", 0)
            char = int(parts[1])
            names = [nm.strip() for nm in parts[2].split(",") if nm.strip()]
            order = _order_from_token(parts[3], len(names))
            ring = PolyRing(field_of_characteristic(char), names, order)
            header = parts
            continue
        polys.append(parse_polynomial(stripped, ring))
    if ring is None:
        raise ParseError("empty ideal file", 0)
    return Ideal(ring, polys)


def render_ideal_file(ideal) -> str:
    ring = ideal.ring
    head = f"ring {ring.field} {','.join(ring.names)} {order_token(ring.order)}"
    return "\n".join([head] + [str(g) for g in ideal.gens]) + "\n"
