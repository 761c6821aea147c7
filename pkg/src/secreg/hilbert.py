"""Hilbert series of monomial quotients by the pivot-variable recursion.

Everything works on exponent tuples; numerators are integer coefficient
lists indexed by degree.  For an ideal the lead terms of a reduced Groebner
basis are fed in, so `numerator(S/I) = numerator(S/LT(I))`.
"""

from __future__ import annotations

from math import comb


def _poly_add(a: list, b: list) -> list:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return out


def _poly_sub(a: list, b: list) -> list:
    out = list(a) + [0] * max(0, len(b) - len(a))
    for i, c in enumerate(b):
        out[i] -= c
    return out


def _poly_mul(a: list, b: list) -> list:
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                if cb:
                    out[i + j] += ca * cb
    return out


def _shift(a: list, k: int) -> list:
    return [0] * k + list(a)


def _trim(a: list) -> list:
    while a and a[-1] == 0:
        a.pop()
    return a


def _minimalize(gens: list) -> list:
    """Drop monomials divisible by another generator."""
    gens = sorted(set(gens), key=lambda e: (sum(e), e))
    out = []
    for g in gens:
        if not any(all(x >= y for x, y in zip(g, h)) for h in out):
            out.append(g)
    return out


def monomial_numerator(gens: list, nvars: int) -> list:
    """Numerator of Hilb(S/<gens>) over (1-t)^nvars, as coefficient list."""
    gens = _minimalize([tuple(g) for g in gens])
    return _trim(_numerator_rec(gens, nvars))


def _numerator_rec(gens: list, nvars: int) -> list:
    if not gens:
        return [1]
    if any(sum(g) == 0 for g in gens):
        return [0]
    # base case: pairwise-coprime generators (includes pure powers)
    supports = [tuple(i for i, e in enumerate(g) if e) for g in gens]
    seen: set = set()
    coprime = True
    for sup in supports:
        if any(i in seen for i in sup):
            coprime = False
            break
        seen.update(sup)
    if coprime:
        out = [1]
        for g in gens:
            out = _poly_mul(out, _poly_sub([1], _shift([1], sum(g))))
        return out
    # pivot: a variable occurring most often, with its minimum positive exponent
    counts = [0] * nvars
    for g in gens:
        for i, e in enumerate(g):
            if e:
                counts[i] += 1
    piv_var = max(range(nvars), key=lambda i: counts[i])
    piv_exp = min(g[piv_var] for g in gens if g[piv_var])
    pivot = tuple(piv_exp if i == piv_var else 0 for i in range(nvars))
    # S/I: numerator(I + <pivot>) + t^deg(pivot) * numerator(I : pivot)
    plus = _minimalize(gens + [pivot])
    colon = _minimalize(
        [tuple(max(e - (piv_exp if i == piv_var else 0), 0) for i, e in enumerate(g)) for g in gens]
    )
    return _poly_add(
        _numerator_rec(plus, nvars),
        _shift(_numerator_rec(colon, nvars), sum(pivot)),
    )


class HilbertSeries:
    """H(S/I, t) = numerator / (1-t)^nvars, with the reduced form cached."""

    def __init__(self, numerator: list, nvars: int):
        self.numerator = _trim(list(numerator))
        self.nvars = nvars
        red = list(self.numerator)
        cancel = 0
        while red and sum(red) == 0:
            red = _trim(_divide_by_one_minus_t(red, 1))
            cancel += 1
        self.reduced_numerator = red if red else [0]
        self.cancelled = cancel

    @property
    def pole_order(self) -> int:
        if not any(self.numerator):
            return 0
        return self.nvars - self.cancelled

    def krull_dim(self) -> int:
        return self.pole_order

    def degree(self) -> int:
        return sum(self.reduced_numerator)

    def hf(self, j: int) -> int:
        """Hilbert function value dim (S/I)_j."""
        if j < 0:
            return 0
        n = self.nvars
        return sum(
            c * comb(j - k + n - 1, n - 1)
            for k, c in enumerate(self.numerator)
            if k <= j
        )

    def hilbert_polynomial_value(self, j: int) -> int:
        """Value of the Hilbert polynomial at j (agrees with hf for large j)."""
        n = self.nvars
        total = 0
        for k, c in enumerate(self.numerator):
            if c:
                total += c * _binom_poly(j - k + n - 1, n - 1)
        return total

    def __eq__(self, other):
        return (
            isinstance(other, HilbertSeries)
            and self.nvars == other.nvars
            and self.numerator == other.numerator
        )

    def __repr__(self):
        num = " + ".join(
            f"{c}*t^{k}" if k else str(c) for k, c in enumerate(self.numerator) if c
        )
        return f"({num}) / (1-t)^{self.nvars}"


def _divide_by_one_minus_t(num: list, times: int) -> list:
    out = list(num)
    for _ in range(times):
        acc = 0
        nxt = []
        for c in out:
            acc += c
            nxt.append(acc)
        if nxt and nxt[-1] != 0:
            raise ValueError("numerator not divisible by (1-t)")
        out = _trim(nxt)
    return out


def _binom_poly(m: int, k: int):
    """binomial(m, k) as the degree-k polynomial, valid for negative m."""
    num = 1
    for i in range(k):
        num *= m - i
    den = 1
    for i in range(1, k + 1):
        den *= i
    q, r = divmod(num, den)
    if r:
        raise ArithmeticError("binomial polynomial not integral")
    return q
