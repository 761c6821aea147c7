"""Buchberger engine and ideal-theoretic operations.

The engine works on raw term dicts {monomial code: coeff}; basis elements
are kept monic.  Pair handling is the Gebauer-Moeller update (product and
chain criteria); selection is by sugar degree with ties broken by pair
creation index, so runs are deterministic.

In tracked mode every basis element carries a shadow vector expressing it
in terms of the input generators, and every S-pair that reduces to zero
emits its shadow as a syzygy.  Coprime pairs discarded by the product
criterion emit their Koszul syzygy instead, so the emitted set generates
the full syzygy module of the inputs.
"""

from __future__ import annotations

import heapq
from fractions import Fraction

from .field import PrimeField, QQ
from .hilbert import HilbertSeries, monomial_numerator
from .ring import (
    GREVLEX,
    MonomialOrder,
    PolyRing,
    Polynomial,
    RingError,
    elimination_order,
)


class GroebnerError(ValueError):
    pass


# ---------------------------------------------------------------------------
# raw-dict kernels


def reduce_full(h: dict, leads: list, datas: list, ring: PolyRing, shadows=None,
                hshadow=None, sugar=None, red_sugars=None):
    """Full normal form of h against monic reducers.

    Returns (remainder, sugar').  If `shadows`/`hshadow` are given, the
    shadow combination is updated alongside (hshadow mutated in place).
    """
    enc = ring.enc
    one = enc.one
    guard = enc.guard
    fld = ring.field
    prime = isinstance(fld, PrimeField)
    p = fld.p if prime else 0
    pure = enc._pure_grevlex
    work = dict(h)
    out: dict = {}
    nred = len(leads)
    while work:
        m = max(work)
        c = work[m]
        hit = -1
        if pure:
            for i in range(nred):
                if not ((m - leads[i] + one) & guard):
                    hit = i
                    break
        else:
            for i in range(nred):
                if enc.divides(leads[i], m):
                    hit = i
                    break
        if hit < 0:
            del work[m]
            out[m] = c
            continue
        g = datas[hit]
        off = m - leads[hit]  # key shift realizing multiplication by m/lead
        if prime:
            for k, cg in g.items():
                nk = k + off
                v = (work.get(nk, 0) - c * cg) % p
                if v:
                    work[nk] = v
                else:
                    work.pop(nk, None)
            if shadows is not None:
                for k, cg in shadows[hit].items():
                    nk = (k[0] + off, k[1])
                    v = (hshadow.get(nk, 0) - c * cg) % p
                    if v:
                        hshadow[nk] = v
                    else:
                        hshadow.pop(nk, None)
        else:
            for k, cg in g.items():
                nk = k + off
                v = fld.sub(work.get(nk, fld.zero), fld.mul(c, cg))
                if v == fld.zero:
                    work.pop(nk, None)
                else:
                    work[nk] = v
            if shadows is not None:
                for k, cg in shadows[hit].items():
                    nk = (k[0] + off, k[1])
                    v = fld.sub(hshadow.get(nk, fld.zero), fld.mul(c, cg))
                    if v == fld.zero:
                        hshadow.pop(nk, None)
                    else:
                        hshadow[nk] = v
        if sugar is not None and red_sugars is not None:
            sugar = max(
                sugar, red_sugars[hit] + ring.wdeg(enc.quotient(m, leads[hit]))
            )
    return out, sugar


def _shadow_sub(a: dict, b: dict, fld) -> dict:
    out = dict(a)
    zero = fld.zero
    for k, v in b.items():
        nv = fld.sub(out.get(k, zero), v)
        if nv == zero:
            out.pop(k, None)
        else:
            out[k] = nv
    return out


class _Engine:
    """One Buchberger run over a polynomial ring (rank-1 case)."""

    def __init__(self, ring: PolyRing, track: bool = False):
        self.ring = ring
        self.track = track
        self.leads: list[int] = []
        self.datas: list[dict] = []
        self.sugars: list[int] = []
        self.shadows: list[dict] = [] if track else None
        self.syzygies: list[dict] = [] if track else None
        self.pairs: list = []  # heap of (sugar, seq, i, j, lcm)
        self.pair_seq = 0

    def add_generator(self, f: dict, sugar: int | None, shadow: dict | None):
        """Gebauer-Moeller update with the new (monic) element."""
        enc = self.ring.enc
        wd = self.ring.wdeg
        t = len(self.leads)
        lt = max(f)
        if sugar is None:
            sugar = max(wd(m) for m in f)
        new_lcms = [enc.lcm(self.leads[i], lt) for i in range(t)]
        # F/M criteria: among equal lcms keep the smallest index, then drop
        # pairs whose lcm is properly divisible by another new pair's lcm.
        by_lcm = sorted(range(t), key=lambda i: (new_lcms[i], i))
        kept: list = []
        seen: set = set()
        for i in by_lcm:
            if new_lcms[i] in seen:
                continue
            seen.add(new_lcms[i])
            kept.append(i)
        surviving = [
            i
            for i in kept
            if not any(
                enc.divides(new_lcms[j], new_lcms[i]) and new_lcms[j] != new_lcms[i]
                for j in kept
            )
        ]
        for i in surviving:
            lcm = new_lcms[i]
            if lcm == enc.mul(self.leads[i], lt):  # product criterion
                if self.track:
                    self.syzygies.append(self._koszul(i, f, shadow))
                continue
            si = self.sugars[i] + wd(enc.quotient(lcm, self.leads[i]))
            st = sugar + wd(enc.quotient(lcm, lt))
            heapq.heappush(self.pairs, (max(si, st), self.pair_seq, i, t, lcm))
            self.pair_seq += 1
        # chain criterion on old pairs
        if self.pairs:
            fresh = []
            changed = False
            for entry in self.pairs:
                _, _, i, j, lcm = entry
                if (
                    enc.divides(lt, lcm)
                    and new_lcms[i] != lcm
                    and new_lcms[j] != lcm
                ):
                    changed = True
                    continue
                fresh.append(entry)
            if changed:
                heapq.heapify(fresh)
                self.pairs = fresh
        self.leads.append(lt)
        self.datas.append(f)
        self.sugars.append(sugar)
        if self.track:
            self.shadows.append(shadow)

    def _koszul(self, i: int, f_new: dict, shadow_new: dict) -> dict:
        """Koszul syzygy f_j * sh_i - f_i * sh_j of basis elements i and new."""
        fld = self.ring.field
        one = self.ring.enc.one
        out: dict = {}
        zero = fld.zero
        for m, c in f_new.items():
            off = m - one
            for k, v in self.shadows[i].items():
                nk = (k[0] + off, k[1])
                nv = fld.add(out.get(nk, zero), fld.mul(c, v))
                if nv == zero:
                    out.pop(nk, None)
                else:
                    out[nk] = nv
        for m, c in self.datas[i].items():
            off = m - one
            for k, v in shadow_new.items():
                nk = (k[0] + off, k[1])
                nv = fld.sub(out.get(nk, zero), fld.mul(c, v))
                if nv == zero:
                    out.pop(nk, None)
                else:
                    out[nk] = nv
        return out

    def min_pair_degree(self):
        return self.pairs[0][0] if self.pairs else None

    def normal_form(self, h: dict):
        return reduce_full(h, self.leads, self.datas, self.ring)[0]

    def run(self):
        while self.step():
            pass

    def step(self) -> bool:
        ring = self.ring
        enc = ring.enc
        fld = ring.field
        if self.pairs:
            sugar, _, i, j, lcm = heapq.heappop(self.pairs)
            gi, gj = self.datas[i], self.datas[j]
            offi = lcm - self.leads[i]
            offj = lcm - self.leads[j]
            spoly = {m + offi: c for m, c in gi.items()}
            if isinstance(fld, PrimeField):
                p = fld.p
                for m, c in gj.items():
                    nk = m + offj
                    v = (spoly.get(nk, 0) - c) % p
                    if v:
                        spoly[nk] = v
                    else:
                        spoly.pop(nk, None)
            else:
                for m, c in gj.items():
                    nk = m + offj
                    v = fld.sub(spoly.get(nk, fld.zero), c)
                    if v == fld.zero:
                        spoly.pop(nk, None)
                    else:
                        spoly[nk] = v
            hshadow = None
            if self.track:
                hshadow = _shadow_sub(
                    {(k[0] + offi, k[1]): v for k, v in self.shadows[i].items()},
                    {(k[0] + offj, k[1]): v for k, v in self.shadows[j].items()},
                    fld,
                )
            rem, sugar = reduce_full(
                spoly, self.leads, self.datas, ring,
                shadows=self.shadows if self.track else None,
                hshadow=hshadow, sugar=sugar, red_sugars=self.sugars,
            )
            if rem:
                lc = rem[max(rem)]
                if lc != fld.one:
                    inv = fld.inv(lc)
                    if isinstance(fld, PrimeField):
                        p = fld.p
                        rem = {m: (c * inv) % p for m, c in rem.items()}
                    else:
                        rem = {m: fld.mul(c, inv) for m, c in rem.items()}
                    if self.track:
                        hshadow = {
                            k: (v * inv) % p if isinstance(fld, PrimeField) else fld.mul(v, inv)
                            for k, v in hshadow.items()
                        }
                self.add_generator(rem, sugar, hshadow)
            elif self.track:
                if hshadow:
                    self.syzygies.append(hshadow)
            return True
        return False


def buchberger(polys: list[Polynomial], ring: PolyRing, track: bool = False):
    """Groebner basis of the ideal generated by polys (monic, not reduced).

    Returns (basis dicts, shadows, syzygies); shadows/syzygies are None
    unless track is set.  Shadow term keys are (monomial code, gen index).
    """
    eng = _Engine(ring, track=track)
    fld = ring.field
    enc = ring.enc
    items = []
    for idx, f in enumerate(polys):
        if f.ring is not ring:
            raise RingError("generator in wrong ring")
        if not f.d:
            continue
        items.append((idx, f))
    for idx, f in items:
        d = f.d
        lc = d[max(d)]
        inv = fld.inv(lc)
        if isinstance(fld, PrimeField):
            d = {m: (c * inv) % fld.p for m, c in d.items()}
        else:
            d = {m: fld.mul(c, inv) for m, c in d.items()}
        shadow = {(enc.one, idx): inv} if track else None
        sugar = max(ring.wdeg(m) for m in d)
        eng.add_generator(d, sugar, shadow)
    eng.run()
    return eng.datas, eng.shadows, eng.syzygies


def interreduce(dicts: list[dict], ring: PolyRing) -> list[dict]:
    """Reduced basis: minimal lead set, tails fully reduced, monic, sorted."""
    if not dicts:
        return []
    enc = ring.enc
    items = sorted(dicts, key=max)
    keep: list[dict] = []
    leads = [max(d) for d in items]
    for i, d in enumerate(items):
        lt = leads[i]
        if any(
            j != i and enc.divides(leads[j], lt) and (leads[j] != lt or j < i)
            for j in range(len(items))
        ):
            continue
        keep.append(d)
    out = []
    fld = ring.field
    kept_leads = [max(d) for d in keep]
    for i, d in enumerate(keep):
        others_leads = kept_leads[:i] + kept_leads[i + 1 :]
        others = keep[:i] + keep[i + 1 :]
        rem, _ = reduce_full(d, others_leads, others, ring)
        lc = rem[max(rem)]
        if lc != fld.one:
            inv = fld.inv(lc)
            if isinstance(fld, PrimeField):
                rem = {m: (c * inv) % fld.p for m, c in rem.items()}
            else:
                rem = {m: fld.mul(c, inv) for m, c in rem.items()}
        out.append(rem)
    out.sort(key=max)
    return out


class GroebnerBasis:
    """Reduced Groebner basis bound to a ring (which carries the order)."""

    def __init__(self, ring: PolyRing, elements: list[Polynomial]):
        self.ring = ring
        self.elements = tuple(elements)
        self._leads = [g.lead_code() for g in self.elements]
        self._datas = [g.d for g in self.elements]

    @property
    def order(self) -> MonomialOrder:
        return self.ring.order

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def lead_exponents(self) -> list[tuple]:
        return [self.ring.enc.decode(code) for code in self._leads]

    def reduce(self, f: Polynomial) -> Polynomial:
        if f.ring is not self.ring:
            f = self.ring.convert(f)
        rem, _ = reduce_full(f.d, self._leads, self._datas, self.ring)
        return Polynomial(self.ring, rem)

    def __eq__(self, other):
        return (
            isinstance(other, GroebnerBasis)
            and self.ring is other.ring
            and all(a.d == b.d for a, b in zip(self.elements, other.elements))
            and len(self.elements) == len(other.elements)
        )

    def spair_check(self) -> bool:
        """Re-verify the Buchberger criterion: all S-polynomials reduce to 0."""
        enc = self.ring.enc
        n = len(self.elements)
        for i in range(n):
            for j in range(i + 1, n):
                lcm = enc.lcm(self._leads[i], self._leads[j])
                gi = Polynomial(self.ring, self._datas[i]).shift(
                    enc.quotient(lcm, self._leads[i])
                )
                gj = Polynomial(self.ring, self._datas[j]).shift(
                    enc.quotient(lcm, self._leads[j])
                )
                if self.reduce(gi - gj):
                    return False
        return True


class Ideal:
    """Generator list plus cached reduced Groebner bases (one per ring)."""

    def __init__(self, ring: PolyRing, gens, homogeneous: bool | None = None):
        self.ring = ring
        normalized = []
        for g in gens:
            if isinstance(g, str):
                from .parse import parse_polynomial

                g = parse_polynomial(g, ring)
            if g.ring is not ring:
                raise RingError("generator in wrong ring")
            if g.d:
                normalized.append(g)
        self.gens = tuple(normalized)
        if homogeneous:
            for g in self.gens:
                if not g.is_homogeneous():
                    raise GroebnerError("generator is not homogeneous")
        self._gb: dict = {}
        self._hilbert = None

    def is_homogeneous(self) -> bool:
        return all(g.is_homogeneous() for g in self.gens)

    def groebner(self, ring: PolyRing | None = None) -> GroebnerBasis:
        tgt = ring or self.ring
        key = id(tgt)
        got = self._gb.get(key)
        if got is not None:
            return got
        gens = [tgt.convert(g) for g in self.gens]
        basis, _, _ = buchberger(gens, tgt)
        reduced = interreduce(basis, tgt)
        gb = GroebnerBasis(tgt, [Polynomial(tgt, d) for d in reduced])
        self._gb[key] = gb
        return gb

    def normal_form(self, f: Polynomial) -> Polynomial:
        return self.groebner().reduce(f)

    def contains(self, f: Polynomial) -> bool:
        return not self.normal_form(f).d

    def contains_ideal(self, other: "Ideal") -> bool:
        return all(self.contains(self.ring.convert(g)) for g in other.gens)

    def hilbert_series(self) -> HilbertSeries:
        if self._hilbert is None:
            if not self.is_homogeneous():
                raise GroebnerError("Hilbert series requires a homogeneous ideal")
            if not self.ring._std_weights:
                raise GroebnerError("Hilbert series requires the standard grading")
            gb = self.groebner()
            self._hilbert = HilbertSeries(
                monomial_numerator(gb.lead_exponents(), self.ring.nvars),
                self.ring.nvars,
            )
        return self._hilbert

    def dim_degree(self):
        """(projective dimension of the scheme, degree)."""
        hs = self.hilbert_series()
        if not any(hs.numerator) or (len(self.gens) and not any(
            g.d for g in self.gens
        )):
            raise GroebnerError("unit ideal has no projective scheme")
        if self.contains(self.ring.one()):
            raise GroebnerError("unit ideal has no projective scheme")
        return hs.pole_order - 1, hs.degree()

    def __eq__(self, other):
        if not isinstance(other, Ideal) or other.ring is not self.ring:
            return NotImplemented
        return ideal_equal(self, other)

    def __repr__(self):
        return f"Ideal({len(self.gens)} gens in {','.join(self.ring.names)})"


def ideal_equal(I: Ideal, J: Ideal) -> bool:
    if I.ring is not J.ring:
        raise RingError("ideals live in different rings")
    a = I.groebner()
    b = J.groebner()
    return len(a) == len(b) and all(x.d == y.d for x, y in zip(a, b))


def normal_form(f: Polynomial, G: GroebnerBasis) -> Polynomial:
    return G.reduce(f)
