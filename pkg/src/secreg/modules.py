"""Module Groebner bases, syzygies and the level pass used by resolutions.

Elements of a graded free module are dicts {key: coeff}.  A key is a pair
(k0, tail): k0 is the ring code of (monomial * Schreyer chain monomial) and
tail breaks ties by the component chain, smaller component first.  Tuple
comparison of keys realizes the Schreyer-induced order, multiplication by a
ring monomial is a uniform shift of k0, and divisibility between terms in
the same component is the scalar SWAR test on k0.

The product criterion is never applied here (it is invalid for modules);
only the chain criterion prunes pairs, which keeps the emitted zero-
reduction shadows a generating set of the syzygy module.
"""

from __future__ import annotations

import heapq

from .field import PrimeField
from .ring import PolyRing, Polynomial, RingError


class ModuleContext:
    """A graded free module with per-component Schreyer shift data."""

    def __init__(self, ring: PolyRing, twists, shifts=None, tails=None):
        self.ring = ring
        self.twists = list(twists)
        self.rank = len(self.twists)
        one = ring.enc.one
        self.shifts = list(shifts) if shifts is not None else [one] * self.rank
        self.tails = (
            list(tails) if tails is not None else [(-c,) for c in range(self.rank)]
        )

    def key_of(self, code: int, comp: int):
        return (code + self.shifts[comp] - self.ring.enc.one, self.tails[comp])

    def code_of(self, key) -> int:
        comp = -key[1][-1]
        return key[0] - self.shifts[comp] + self.ring.enc.one

    def comp_of(self, key) -> int:
        return -key[1][-1]

    def term_degree(self, key) -> int:
        comp = -key[1][-1]
        return self.ring.wdeg(self.code_of(key)) + self.twists[comp]

    def element_degree(self, elem: dict) -> int:
        return max(self.term_degree(k) for k in elem)

    def is_homogeneous(self, elem: dict) -> bool:
        degs = {self.term_degree(k) for k in elem}
        return len(degs) <= 1

    def from_columns(self, columns):
        """Module elements from polynomial column vectors (length = rank)."""
        out = []
        for col in columns:
            elem: dict = {}
            for comp, poly in enumerate(col):
                if poly is None or not poly.d:
                    continue
                for code, c in poly.d.items():
                    elem[self.key_of(code, comp)] = c
            out.append(elem)
        return out

    def to_columns(self, elem: dict):
        """Inverse of from_columns; returns a list of Polynomials."""
        cols = [dict() for _ in range(self.rank)]
        for key, c in elem.items():
            comp = self.comp_of(key)
            cols[comp][self.code_of(key)] = c
        return [Polynomial(self.ring, d) for d in cols]

    def child(self, gens: list):
        """Context of the free module on `gens` with the induced order.

        The chain shift of generator c is the full key code of its lead, so
        child keys compare by (lead of image in the parent, component).
        """
        shifts = []
        tails = []
        twists = []
        for c, g in enumerate(gens):
            lead = max(g)
            shifts.append(lead[0])
            tails.append(lead[1] + (-c,))
            twists.append(self.element_degree(g))
        return ModuleContext(self.ring, twists, shifts, tails)

    def keyed_from_shadow(self, shadow: dict) -> dict:
        """Interpret a shadow {(ring code, gen index): coeff} in this context."""
        return {self.key_of(code, idx): v for (code, idx), v in shadow.items()}


def _shadow_sub_shift(h: dict, sh: dict, off: int, c, p) -> None:
    for k, cg in sh.items():
        nk = (k[0] + off, k[1])
        v = (h.get(nk, 0) - c * cg) % p
        if v:
            h[nk] = v
        else:
            h.pop(nk, None)


class ModuleEngine:
    """Buchberger over a free module; chain criterion only; optional tracking."""

    def __init__(self, ctx: ModuleContext, track: bool = False):
        self.ctx = ctx
        self.ring = ctx.ring
        self.track = track
        self.elems: list[dict] = []
        self.lead_keys: list = []
        self.lead_codes: list[int] = []  # ring code of lead incl. chain shift
        self.comps: list[int] = []
        self.sugars: list[int] = []
        self.shadows: list[dict] | None = [] if track else None
        self.syzygies: list[dict] = []
        self.by_comp: dict[int, list[int]] = {}
        self.pairs: list = []
        self.pair_seq = 0
        if not isinstance(self.ring.field, PrimeField):
            raise RingError("module engine requires a prime field")
        self.p = self.ring.field.p

    # -- reduction ---------------------------------------------------------

    def normal_form(self, h: dict, hshadow: dict | None = None, sugar=None):
        enc = self.ring.enc
        one = enc.one
        guard = enc.guard
        p = self.p
        work = dict(h)
        out: dict = {}
        while work:
            key = max(work)
            c = work[key]
            hit = -1
            k0 = key[0]
            for i in self.by_comp.get(key[1], ()):  # same full tail only
                if not ((k0 - self.lead_keys[i][0] + one) & guard):
                    hit = i
                    break
            if hit < 0:
                del work[key]
                out[key] = c
                continue
            g = self.elems[hit]
            off = k0 - self.lead_keys[hit][0]
            for k, cg in g.items():
                nk = (k[0] + off, k[1])
                v = (work.get(nk, 0) - c * cg) % p
                if v:
                    work[nk] = v
                else:
                    work.pop(nk, None)
            if hshadow is not None and self.shadows is not None:
                _shadow_sub_shift(hshadow, self.shadows[hit], off, c, p)
            if sugar is not None:
                sugar = max(
                    sugar,
                    self.sugars[hit] + self.ring.wdeg(off + one),
                )
        return out, sugar

    # -- Gebauer-Moeller update (no product criterion) ----------------------

    def add_generator(self, elem: dict, sugar=None, shadow: dict | None = None):
        enc = self.ring.enc
        wd = self.ring.wdeg
        t = len(self.elems)
        lead = max(elem)
        tail = lead[1]
        if sugar is None:
            sugar = self.ctx.element_degree(elem)
        peers = self.by_comp.get(tail, [])
        lead_code = self.ctx.code_of(lead)
        new_lcms = {}
        for i in peers:
            new_lcms[i] = enc.lcm(self.lead_codes[i], lead_code)
        by_lcm = sorted(peers, key=lambda i: (new_lcms[i], i))
        kept = []
        seen = set()
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
            si = self.sugars[i] + wd(enc.quotient(lcm, self.lead_codes[i]))
            st = sugar + wd(enc.quotient(lcm, lead_code))
            heapq.heappush(self.pairs, (max(si, st), self.pair_seq, i, t, lcm))
            self.pair_seq += 1
        if self.pairs:
            fresh = []
            changed = False
            for entry in self.pairs:
                _, _, i, j, lcm = entry
                if (
                    self.lead_keys[i][1] == tail
                    and enc.divides(lead_code, lcm)
                    and new_lcms.get(i) != lcm
                    and new_lcms.get(j) != lcm
                ):
                    changed = True
                    continue
                fresh.append(entry)
            if changed:
                heapq.heapify(fresh)
                self.pairs = fresh
        self.elems.append(elem)
        self.lead_keys.append(lead)
        self.lead_codes.append(lead_code)
        self.comps.append(-tail[-1] if tail else 0)
        self.sugars.append(sugar)
        if self.track:
            self.shadows.append(shadow if shadow is not None else {})
        self.by_comp.setdefault(tail, []).append(t)

    def step(self) -> bool:
        if not self.pairs:
            return False
        sugar, _, i, j, lcm = heapq.heappop(self.pairs)
        p = self.p
        offi = lcm - self.lead_codes[i]
        offj = lcm - self.lead_codes[j]
        spoly = {(k[0] + offi, k[1]): c for k, c in self.elems[i].items()}
        for k, c in self.elems[j].items():
            nk = (k[0] + offj, k[1])
            v = (spoly.get(nk, 0) - c) % p
            if v:
                spoly[nk] = v
            else:
                spoly.pop(nk, None)
        hshadow = None
        if self.track:
            hshadow = {(k[0] + offi, k[1]): v for k, v in self.shadows[i].items()}
            _shadow_sub_shift(hshadow, self.shadows[j], offj, 1, p)
        rem, sugar = self.normal_form(spoly, hshadow, sugar)
        if rem:
            lead = max(rem)
            lc = rem[lead]
            if lc != 1:
                inv = pow(lc, -1, p)
                rem = {k: (c * inv) % p for k, c in rem.items()}
                if self.track:
                    hshadow = {k: (c * inv) % p for k, c in hshadow.items()}
            self.add_generator(rem, sugar, hshadow)
        elif self.track and hshadow:
            self.syzygies.append(hshadow)
        return True

    def run(self):
        while self.step():
            pass

    def min_pair_degree(self):
        return self.pairs[0][0] if self.pairs else None


def module_buchberger(ctx: ModuleContext, elements: list[dict], track: bool = False):
    """Module GB; returns (engine) with basis/shadows/syzygies populated."""
    eng = ModuleEngine(ctx, track=track)
    p = eng.p
    for idx, elem in enumerate(elements):
        if not elem:
            continue
        lc = elem[max(elem)]
        inv = pow(lc, -1, p) if lc != 1 else 1
        if inv != 1:
            elem = {k: (c * inv) % p for k, c in elem.items()}
        shadow = {(ctx.ring.enc.one, idx): inv} if track else None
        eng.add_generator(elem, None, shadow)
    eng.run()
    return eng


def module_syzygies(ctx: ModuleContext, elements: list[dict]) -> list[dict]:
    """Generators of Syz(elements), as shadows over the input indices."""
    eng = module_buchberger(ctx, elements, track=True)
    return eng.syzygies


def module_divide(eng: ModuleEngine, elem: dict):
    """Division with quotient tracking against a tracked engine's basis.

    Returns (remainder, quotient) with elem = quotient . inputs + remainder,
    the quotient expressed over the engine's input generators.
    """
    enc = eng.ring.enc
    one = enc.one
    guard = enc.guard
    p = eng.p
    work = dict(elem)
    out: dict = {}
    quotient: dict = {}
    while work:
        key = max(work)
        c = work[key]
        hit = -1
        k0 = key[0]
        for i in eng.by_comp.get(key[1], ()):
            if not ((k0 - eng.lead_keys[i][0] + one) & guard):
                hit = i
                break
        if hit < 0:
            del work[key]
            out[key] = c
            continue
        off = k0 - eng.lead_keys[hit][0]
        for k, cg in eng.elems[hit].items():
            nk = (k[0] + off, k[1])
            v = (work.get(nk, 0) - c * cg) % p
            if v:
                work[nk] = v
            else:
                work.pop(nk, None)
        for k, cg in eng.shadows[hit].items():
            nk = (k[0] + off, k[1])
            v = (quotient.get(nk, 0) + c * cg) % p
            if v:
                quotient[nk] = v
            else:
                quotient.pop(nk, None)
    return out, quotient


def level_pass(ctx: ModuleContext, candidates: list[dict]):
    """Greedy minimal generators of <candidates> plus their syzygies.

    Candidates must be homogeneous.  They are processed in degree order,
    synchronized with S-pair processing, so a candidate is kept exactly when
    it is not in the submodule generated by previously kept ones.  Kept
    elements become the generators (fully reduced, monic); the returned
    syzygies generate the relation module of the kept generators.
    """
    eng = ModuleEngine(ctx, track=True)
    order = sorted(
        range(len(candidates)),
        key=lambda i: (ctx.element_degree(candidates[i]), i),
    )
    kept: list[dict] = []
    pos = 0
    p = eng.p
    while pos < len(order) or eng.pairs:
        cand_deg = (
            ctx.element_degree(candidates[order[pos]]) if pos < len(order) else None
        )
        pair_deg = eng.min_pair_degree()
        if pair_deg is not None and (cand_deg is None or pair_deg <= cand_deg):
            eng.step()
            continue
        elem = candidates[order[pos]]
        pos += 1
        rem, _ = eng.normal_form(dict(elem))
        if not rem:
            continue
        lead = max(rem)
        lc = rem[lead]
        if lc != 1:
            inv = pow(lc, -1, p)
            rem = {k: (c * inv) % p for k, c in rem.items()}
        shadow = {(ctx.ring.enc.one, len(kept)): 1}
        kept.append(rem)
        eng.add_generator(rem, None, shadow)
    return kept, eng.syzygies
