"""Sparse multivariate polynomials in graded rings with selectable orders.

Monomials are packed into single Python ints so that *integer comparison
coincides with the monomial order*.  A grevlex block stores, from the most
significant field down: the block degree, then complemented exponents
(C - e) with the least variable in the highest field.  Larger int, larger
monomial; `max()` over a term dict is the leading term.  Multiplication is
`a + b - ONE`, and divisibility is a single mask test on `a - b + ONE`
(guard bits catch any negative exponent field).
"""

from __future__ import annotations

from fractions import Fraction

from .field import QQ, FieldError, PrimeField

FIELD_BITS = 16
FIELD_MASK = (1 << FIELD_BITS) - 1
COMP = (1 << (FIELD_BITS - 1)) - 1  # exponents must stay below 2^15
GUARD_BIT = 1 << (FIELD_BITS - 1)


class RingError(ValueError):
    pass


class _GrevlexBlock:
    """Degree-first block; ties by smallest exponent in the least variable."""

    style = "grevlex"

    def __init__(self, nvars: int):
        self.nvars = nvars
        self.width = (nvars + 1) * FIELD_BITS
        self.one = sum(COMP << (FIELD_BITS * j) for j in range(nvars))
        self.guard = sum(GUARD_BIT << (FIELD_BITS * j) for j in range(nvars))

    def encode(self, exps) -> int:
        deg = 0
        code = 0
        for j, e in enumerate(exps):
            if e < 0 or e > COMP:
                raise RingError(f"exponent {e} out of range")
            deg += e
            code |= (COMP - e) << (FIELD_BITS * j)
        if deg > COMP:
            raise RingError(f"total degree {deg} out of range")
        return code | (deg << (FIELD_BITS * self.nvars))

    def decode(self, code: int):
        return tuple(
            COMP - ((code >> (FIELD_BITS * j)) & FIELD_MASK) for j in range(self.nvars)
        )

    def degree(self, code: int) -> int:
        return code >> (FIELD_BITS * self.nvars)


class _LexBlock:
    style = "lex"

    def __init__(self, nvars: int):
        self.nvars = nvars
        self.width = nvars * FIELD_BITS
        self.one = 0
        self.guard = sum(GUARD_BIT << (FIELD_BITS * j) for j in range(nvars))

    def encode(self, exps) -> int:
        code = 0
        for j, e in enumerate(exps):
            if e < 0 or e > COMP:
                raise RingError(f"exponent {e} out of range")
            code |= e << (FIELD_BITS * (self.nvars - 1 - j))
        return code

    def decode(self, code: int):
        return tuple(
            (code >> (FIELD_BITS * (self.nvars - 1 - j))) & FIELD_MASK
            for j in range(self.nvars)
        )

    def degree(self, code: int) -> int:
        return sum(self.decode(code))


class MonomialOrder:
    """grevlex | lex | block(split, inner orders); total and multiplicative."""

    def __init__(self, kind: str = "grevlex", blocks=None):
        self.kind = kind
        if kind == "block":
            if not blocks:
                raise RingError("block order needs block sizes")
            self.blocks = tuple(blocks)  # [(size, inner_kind), ...]
        elif kind in ("grevlex", "lex"):
            self.blocks = None
        else:
            raise RingError(f"unknown order kind {kind!r}")

    def block_spec(self, nvars: int):
        if self.kind == "block":
            if sum(size for size, _ in self.blocks) != nvars:
                raise RingError("block sizes do not cover the variables")
            return self.blocks
        return ((nvars, self.kind),)

    def __repr__(self):
        if self.kind == "block":
            inner = ",".join(f"{s}:{k}" for s, k in self.blocks)
            return f"block({inner})"
        return self.kind

    def __eq__(self, other):
        return (
            isinstance(other, MonomialOrder)
            and self.kind == other.kind
            and self.blocks == other.blocks
        )

    def __hash__(self):
        return hash((self.kind, self.blocks))


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


def elimination_order(nelim: int, nkeep: int) -> MonomialOrder:
    return MonomialOrder("block", [(nelim, "grevlex"), (nkeep, "grevlex")])


class Encoding:
    """Packed-int monomial codes for a fixed variable count and order."""

    def __init__(self, nvars: int, order: MonomialOrder):
        self.nvars = nvars
        self.order = order
        spec = order.block_spec(nvars)
        blocks = []
        start = 0
        for size, kind in spec:
            blk = _GrevlexBlock(size) if kind == "grevlex" else _LexBlock(size)
            blk.vars = tuple(range(start, start + size))
            blocks.append(blk)
            start += size
        # first block is most significant
        shift = 0
        for blk in reversed(blocks):
            blk.shift = shift
            shift += blk.width
        self.blocks = blocks
        self.one = sum(blk.one << blk.shift for blk in blocks)
        self.guard = sum(blk.guard << blk.shift for blk in blocks)
        self._pure_grevlex = all(b.style == "grevlex" for b in blocks)
        self._pure_lex = len(blocks) == 1 and blocks[0].style == "lex"
        mask = (1 << max(b.width for b in blocks)) - 1
        self._block_masks = [( (1 << b.width) - 1) << b.shift for b in blocks]
        self.var_code = [self.encode(tuple(1 if i == v else 0 for i in range(nvars)))
                         for v in range(nvars)]
        self.var_mul = [c - self.one for c in self.var_code]

    def encode(self, exps) -> int:
        if len(exps) != self.nvars:
            raise RingError("exponent length mismatch")
        code = 0
        for blk in self.blocks:
            code |= blk.encode([exps[v] for v in blk.vars]) << blk.shift
        return code

    def decode(self, code: int):
        exps = [0] * self.nvars
        for blk in self.blocks:
            sub = (code >> blk.shift) & ((1 << blk.width) - 1)
            for v, e in zip(blk.vars, blk.decode(sub)):
                exps[v] = e
        return tuple(exps)

    def mul(self, a: int, b: int) -> int:
        return a + b - self.one

    def divides(self, b: int, a: int) -> bool:
        """True iff monomial b divides monomial a."""
        if self._pure_grevlex:
            return not ((a - b + self.one) & self.guard)
        if self._pure_lex:
            return ((a | self.guard) - b) & self.guard == self.guard
        ea, eb = self.decode(a), self.decode(b)
        return all(x >= y for x, y in zip(ea, eb))

    def quotient(self, a: int, b: int) -> int:
        """Code of a/b; only meaningful when b divides a."""
        return a - b + self.one

    def lcm(self, a: int, b: int) -> int:
        return self.encode(tuple(max(x, y) for x, y in zip(self.decode(a), self.decode(b))))

    def total_degree(self, code: int) -> int:
        deg = 0
        for blk in self.blocks:
            sub = (code >> blk.shift) & ((1 << blk.width) - 1)
            deg += blk.degree(sub)
        return deg


class PolyRing:
    """k[x_0..x_{n-1}] with a monomial order and a positive weight vector.

    Weights only affect grading bookkeeping (homogeneity, sugar); the order
    itself is the packed-code integer order.
    """

    _cache: dict = {}

    def __new__(cls, field, names, order: MonomialOrder = GREVLEX, weights=None):
        names = tuple(names)
        weights = tuple(weights) if weights is not None else (1,) * len(names)
        key = (id(field), names, order, weights)
        ring = cls._cache.get(key)
        if ring is not None:
            return ring
        if len(set(names)) != len(names):
            raise RingError("duplicate variable names")
        if len(weights) != len(names):
            raise RingError("weight vector length mismatch")
        self = object.__new__(cls)
        self.field = field
        self.names = names
        self.nvars = len(names)
        self.order = order
        self.weights = weights
        self.enc = Encoding(self.nvars, order)
        self.var_index = {nm: i for i, nm in enumerate(names)}
        self._std_weights = all(w == 1 for w in weights)
        cls._cache[key] = self
        return self

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return Polynomial(self, {self.enc.one: self.field.one})

    def constant(self, c) -> "Polynomial":
        c = self.field.normalize(c)
        return Polynomial(self, {} if c == self.field.zero else {self.enc.one: c})

    def variable(self, i) -> "Polynomial":
        if isinstance(i, str):
            i = self.var_index[i]
        return Polynomial(self, {self.enc.var_code[i]: self.field.one})

    def gens(self):
        return [self.variable(i) for i in range(self.nvars)]

    def monomial(self, exps, coeff=None) -> "Polynomial":
        c = self.field.one if coeff is None else self.field.normalize(coeff)
        if c == self.field.zero:
            return self.zero()
        return Polynomial(self, {self.enc.encode(exps): c})

    def from_dict(self, d: dict) -> "Polynomial":
        return Polynomial(self, d)

    def wdeg(self, code: int) -> int:
        if self._std_weights:
            return self.enc.total_degree(code)
        return sum(w * e for w, e in zip(self.weights, self.enc.decode(code)))

    def convert(self, f: "Polynomial") -> "Polynomial":
        """Re-encode a polynomial from a ring with the same names and field."""
        if f.ring is self:
            return f
        if f.ring.names != self.names or f.ring.field is not self.field:
            raise RingError("convert requires identical variables and field")
        src, dst = f.ring.enc, self.enc
        return Polynomial(self, {dst.encode(src.decode(m)): c for m, c in f.d.items()})

    def __repr__(self):
        return f"PolyRing({self.field!r}, {','.join(self.names)}, {self.order!r})"


class Polynomial:
    """Immutable-by-convention sparse polynomial: dict monomial code -> coeff."""

    __slots__ = ("ring", "d")

    def __init__(self, ring: PolyRing, d: dict):
        self.ring = ring
        self.d = d

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            if other.ring is not self.ring:
                raise RingError("ring mismatch")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        fld = self.ring.field
        zero = fld.zero
        d = dict(self.d)
        for m, c in other.d.items():
            v = fld.add(d.get(m, zero), c)
            if v == zero:
                d.pop(m, None)
            else:
                d[m] = v
        return Polynomial(self.ring, d)

    __radd__ = __add__

    def __neg__(self):
        neg = self.ring.field.neg
        return Polynomial(self.ring, {m: neg(c) for m, c in self.d.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        ring = self.ring
        fld = ring.field
        zero = fld.zero
        one_off = ring.enc.one
        out: dict = {}
        a, b = self.d, other.d
        if len(a) > len(b):
            a, b = b, a
        if isinstance(fld, PrimeField):
            p = fld.p
            for m1, c1 in a.items():
                shift = m1 - one_off
                for m2, c2 in b.items():
                    k = m2 + shift
                    v = (out.get(k, 0) + c1 * c2) % p
                    if v:
                        out[k] = v
                    else:
                        out.pop(k, None)
        else:
            for m1, c1 in a.items():
                shift = m1 - one_off
                for m2, c2 in b.items():
                    k = m2 + shift
                    v = fld.add(out.get(k, zero), fld.mul(c1, c2))
                    if v == zero:
                        out.pop(k, None)
                    else:
                        out[k] = v
        return Polynomial(ring, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise RingError("negative power")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base_needed = n >> 1
            if base_needed:
                base = base * base
            n >>= 1
        return result

    def scale(self, c) -> "Polynomial":
        fld = self.ring.field
        c = fld.normalize(c)
        if c == fld.zero:
            return self.ring.zero()
        return Polynomial(self.ring, {m: fld.mul(v, c) for m, v in self.d.items()})

    def shift(self, mono_code: int, c=None) -> "Polynomial":
        """Multiply by coeff*monomial, given the monomial code."""
        fld = self.ring.field
        off = mono_code - self.ring.enc.one
        if c is None:
            return Polynomial(self.ring, {m + off: v for m, v in self.d.items()})
        return Polynomial(
            self.ring, {m + off: fld.mul(v, c) for m, v in self.d.items()}
        )

    def is_zero(self) -> bool:
        return not self.d

    def __bool__(self):
        return bool(self.d)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring is other.ring and self.d == other.d
        if isinstance(other, (int, Fraction)):
            return self == self.ring.constant(other)
        return NotImplemented

    def __hash__(self):
        return hash((id(self.ring), frozenset(self.d.items())))

    def lead_code(self) -> int:
        if not self.d:
            raise RingError("zero polynomial has no leading term")
        return max(self.d)

    def lc(self):
        return self.d[self.lead_code()]

    def lm_exps(self):
        return self.ring.enc.decode(self.lead_code())

    def monic(self) -> "Polynomial":
        if not self.d:
            return self
        inv = self.ring.field.inv(self.lc())
        return self.scale(inv)

    def degree(self) -> int:
        """Weighted total degree (-1 for the zero polynomial)."""
        if not self.d:
            return -1
        return max(self.ring.wdeg(m) for m in self.d)

    def is_homogeneous(self) -> bool:
        if not self.d:
            return True
        degs = {self.ring.wdeg(m) for m in self.d}
        return len(degs) == 1

    def terms(self):
        """(exponent tuple, coeff) pairs in descending monomial order."""
        dec = self.ring.enc.decode
        return [(dec(m), c) for m, c in sorted(self.d.items(), reverse=True)]

    def coefficient(self, exps):
        code = self.ring.enc.encode(exps)
        return self.d.get(code, self.ring.field.zero)

    def num_terms(self) -> int:
        return len(self.d)

    def substitute(self, images: dict, target: PolyRing | None = None) -> "Polynomial":
        """Ring homomorphism given by variable -> polynomial images.

        Every variable occurring in self must have an image; images must all
        live in one target ring.
        """
        tgt = target
        for img in images.values():
            if isinstance(img, Polynomial):
                if tgt is None:
                    tgt = img.ring
                elif img.ring is not tgt:
                    raise RingError("images live in different rings")
        if tgt is None:
            raise RingError("cannot infer target ring")
        norm_images = {}
        for k, v in images.items():
            i = self.ring.var_index[k] if isinstance(k, str) else k
            norm_images[i] = v if isinstance(v, Polynomial) else tgt.constant(v)
        powers: dict = {}

        def img_pow(i: int, e: int) -> Polynomial:
            key = (i, e)
            got = powers.get(key)
            if got is None:
                got = norm_images[i] ** e
                powers[key] = got
            return got

        out = tgt.zero()
        dec = self.ring.enc.decode
        for m, c in self.d.items():
            term = tgt.constant(c if self.ring.field is tgt.field else c)
            for i, e in enumerate(dec(m)):
                if e:
                    if i not in norm_images:
                        raise RingError(f"no image for variable {self.ring.names[i]}")
                    term = term * img_pow(i, e)
            out = out + term
        return out

    def __str__(self):
        if not self.d:
            return "0"
        fld = self.ring.field
        names = self.ring.names
        dec = self.ring.enc.decode
        parts = []
        for m in sorted(self.d, reverse=True):
            c = self.d[m]
            exps = dec(m)
            factors = []
            for nm, e in zip(names, exps):
                if e == 1:
                    factors.append(nm)
                elif e > 1:
                    factors.append(f"{nm}^{e}")
            if not factors:
                body = str(c)
            elif c == fld.one:
                body = "*".join(factors)
            else:
                body = str(c) + "*" + "*".join(factors)
            parts.append(body)
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__


def poly_arith(f: Polynomial, g: Polynomial, op: str) -> Polynomial:
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    raise ValueError(f"unknown poly op {op!r}")


def compare(ring: PolyRing, exps1, exps2) -> str:
    """Compare two monomials in the ring's order: 'LT', 'EQ' or 'GT'."""
    if len(exps1) != ring.nvars or len(exps2) != ring.nvars:
        raise RingError("exponent length mismatch")
    a, b = ring.enc.encode(exps1), ring.enc.encode(exps2)
    return "EQ" if a == b else ("GT" if a > b else "LT")
