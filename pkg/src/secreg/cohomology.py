"""Deficiency modules, sheaf cohomology of ideal sheaves, and invariants.

K^i(A) = Ext^{r+1-i}_S(A, S(-r-1)) is presented by generators and relations
obtained from the dualized minimal resolution: minimal kernel generators of
the transposed map, lifted image columns, and the kernel generators' own
syzygies.  Graded dimensions then come from lead-term counting, so no large
dense ranks are needed.  For saturated I and i = 1,2,3,

    h^i(P^r, I_X(j)) = dim K^i(A)_{-j}.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .field import PrimeField, SplitMix64, derived_rng
from .groebner import GroebnerError, Ideal
from .hilbert import HilbertSeries, monomial_numerator
from .idealops import irrelevant_ideal, is_saturated, quotient, saturate
from .linalg import nullspace_modp, rref_modp
from .modules import ModuleContext, level_pass, module_buchberger, module_divide
from .resolution import (
    FreeResolution,
    minimal_resolution,
    module_resolution_twists,
    monomials_of_degree,
)
from .ring import PolyRing, Polynomial, RingError


class CohomologyError(ValueError):
    pass


class DeficiencyModule:
    """A graded module given by minimal generators and relations."""

    def __init__(self, ring: PolyRing, gen_twists, relations):
        self.ring = ring
        self.gen_twists = list(gen_twists)
        self.relations = [dict(rel) for rel in relations if rel]
        self._numerators = None
        self._ctx = None
        self._eng = None

    def is_zero(self) -> bool:
        return not self.gen_twists

    def min_generator_degrees(self) -> list[int]:
        return sorted(self.gen_twists)

    def _engine(self):
        if self._eng is None and self.gen_twists:
            self._ctx = ModuleContext(self.ring, self.gen_twists)
            keyed = [self._ctx.keyed_from_shadow(rel) for rel in self.relations]
            self._eng = module_buchberger(self._ctx, keyed)
        return self._eng

    def _component_numerators(self):
        if self._numerators is not None:
            return self._numerators
        ring = self.ring
        per_comp: dict[int, list] = {c: [] for c in range(len(self.gen_twists))}
        eng = self._engine()
        if eng is not None:
            ctx = self._ctx
            for i in range(len(eng.elems)):
                comp = ctx.comp_of(eng.lead_keys[i])
                per_comp[comp].append(ring.enc.decode(eng.lead_codes[i]))
        self._numerators = [
            HilbertSeries(monomial_numerator(per_comp[c], ring.nvars), ring.nvars)
            for c in range(len(self.gen_twists))
        ]
        return self._numerators

    def hf(self, m: int) -> int:
        """dim of the degree-m graded piece."""
        if self.is_zero():
            return 0
        nums = self._component_numerators()
        return sum(
            hs.hf(m - t) for hs, t in zip(nums, self.gen_twists)
        )

    def piece_basis(self, m: int):
        """Standard module monomials (comp, code) spanning the degree-m piece."""
        if self.is_zero():
            return []
        ring = self.ring
        enc = ring.enc
        eng = self._engine()
        leads: dict[int, list[int]] = {}
        if eng is not None:
            for i in range(len(eng.elems)):
                comp = self._ctx.comp_of(eng.lead_keys[i])
                leads.setdefault(comp, []).append(eng.lead_codes[i])
        out = []
        for c, t in enumerate(self.gen_twists):
            for code in monomials_of_degree(ring, m - t):
                if not any(enc.divides(lt, code) for lt in leads.get(c, ())):
                    out.append((c, code))
        return out

    def socle_dims(self, lo: int, hi: int) -> dict[int, int]:
        """dim Soc(.)_m = dim {v in piece m : x_i v = 0 for all i}."""
        if self.is_zero():
            return {m: 0 for m in range(lo, hi + 1)}
        ring = self.ring
        p = ring.field.p
        eng = self._engine()
        ctx = self._ctx
        out = {}
        for m in range(lo, hi + 1):
            basis = self.piece_basis(m)
            if not basis:
                out[m] = 0
                continue
            nxt = self.piece_basis(m + 1)
            nxt_index = {bc: k for k, bc in enumerate(nxt)}
            rows = []
            for c, code in basis:
                col = np.zeros(len(nxt) * ring.nvars, dtype=np.int64)
                for v, vcode in enumerate(ring.enc.var_code):
                    prod = {ctx.key_of(ring.enc.mul(code, vcode), c): 1}
                    red = eng.normal_form(prod)[0] if eng is not None else prod
                    for key, coeff in red.items():
                        bc = (ctx.comp_of(key), ctx.code_of(key))
                        k = nxt_index.get(bc)
                        if k is None:
                            raise CohomologyError("normal form left the basis")
                        col[v * len(nxt) + k] = coeff
                rows.append(col % p)
            M = np.array(rows, dtype=np.int64).T  # map matrix: target x source
            out[m] = nullspace_modp(M, p).shape[0]
        return out

    def regularity(self) -> int:
        """max_i (generator degree at step i) - i over a minimal resolution."""
        if self.is_zero():
            raise CohomologyError("regularity of the zero module")
        if self.relations:
            ctx = ModuleContext(self.ring, self.gen_twists)
            keyed = [ctx.keyed_from_shadow(rel) for rel in self.relations]
            levels = module_resolution_twists(self.ring, self.gen_twists, keyed)
        else:
            levels = [list(self.gen_twists)]
        return max(max(tw) - i for i, tw in enumerate(levels))


def _prune_presentation(ring: PolyRing, gen_twists, relations):
    """Remove degree-0 relation entries until the presentation is minimal."""
    fld = ring.field
    one = ring.enc.one
    gens = list(range(len(gen_twists)))
    rels = [dict(r) for r in relations if r]
    while True:
        target = None
        for ridx, rel in enumerate(rels):
            for (code, comp) in sorted(rel):
                if code == one:
                    target = (ridx, comp)
                    break
            if target:
                break
        if target is None:
            break
        ridx, comp = target
        rel = rels.pop(ridx)
        u = rel[(one, comp)]
        uinv = fld.inv(u)
        rest = {k: v for k, v in rel.items() if k != (one, comp)}
        new_rels = []
        for other in rels:
            coeffs = [(code, v) for (code, c2), v in other.items() if c2 == comp]
            if not coeffs:
                new_rels.append(other)
                continue
            out = {k: v for k, v in other.items() if k[1] != comp}
            for code, v in coeffs:
                factor = fld.mul(v, uinv)
                off = code - one
                for (kc, kcomp), w in rest.items():
                    nk = (kc + off, kcomp)
                    nv = fld.sub(out.get(nk, fld.zero), fld.mul(factor, w))
                    if nv == fld.zero:
                        out.pop(nk, None)
                    else:
                        out[nk] = nv
            if out:
                new_rels.append(out)
        rels = new_rels
        gens.remove(comp)
        # reindex components above the removed one
        remap = {}
        for new_i, old_i in enumerate(gens):
            remap[old_i] = new_i
        fixed = []
        for other in rels:
            fixed.append({(code, remap[c]): v for (code, c), v in other.items()})
        rels = fixed
        gens = list(range(len(gens)))
        gen_twists = [
            t for i, t in enumerate(gen_twists) if i != comp
        ]
    return gen_twists, rels


def _dual_twists(res: FreeResolution, q: int) -> list[int]:
    return [res.ring.nvars - t for t in res.twists(q)]


def deficiency_module(I: Ideal, i: int, res: FreeResolution | None = None) -> DeficiencyModule:
    """K^i(A) = Ext^{r+1-i}(S/I, S(-r-1)) as a presented graded module."""
    ring = I.ring
    if i < 0 or i > ring.nvars - 1:
        raise CohomologyError(f"deficiency index {i} out of range")
    if res is None:
        res = minimal_resolution(I)
    q = ring.nvars - i
    pd = res.length
    if q > pd or q < 1:
        return DeficiencyModule(ring, [], [])
    twists_q = _dual_twists(res, q)
    ctx_q = ModuleContext(ring, twists_q)
    if q < pd:
        # kernel of the transposed map D_q -> D_{q+1}
        mat_next = res.matrices[q]  # F_{q+1} -> F_q
        ctx_next = ModuleContext(ring, _dual_twists(res, q + 1))
        columns = []
        for j in range(len(twists_q)):
            col = [mat_next.entry(j, k) for k in range(mat_next.ncols)]
            columns.append(col)
        elements = ctx_next.from_columns(columns)
        nonzero = [e for e in elements if e]
        zero_cols = [j for j, e in enumerate(elements) if not e]
        eng = module_buchberger(ctx_next, elements, track=True)
        candidates = [ctx_q.keyed_from_shadow(sh) for sh in eng.syzygies]
        candidates += [
            {ctx_q.key_of(ring.enc.one, j): ring.field.one} for j in zero_cols
        ]
        z_kept, z_syz = level_pass(ctx_q, candidates)
    else:
        z_kept = [
            {ctx_q.key_of(ring.enc.one, j): ring.field.one}
            for j in range(len(twists_q))
        ]
        z_syz = []
    if not z_kept:
        return DeficiencyModule(ring, [], [])
    z_twists = [ctx_q.element_degree(e) for e in z_kept]
    # lift the image columns (rows of M_q) through the kernel generators
    mat_q = res.matrices[q - 1]  # F_q -> F_{q-1}
    zeng = module_buchberger(ctx_q, [dict(e) for e in z_kept], track=True)
    relations = [dict(sh) for sh in z_syz]
    for k in range(mat_q.nrows):
        col = [mat_q.entry(k, j) for j in range(mat_q.ncols)]
        elem = ctx_q.from_columns([col])[0]
        if not elem:
            continue
        rem, quot = module_divide(zeng, elem)
        if rem:
            raise CohomologyError("image column does not lie in the kernel")
        if quot:
            relations.append(quot)
    gen_twists, relations = _prune_presentation(ring, z_twists, relations)
    return DeficiencyModule(ring, gen_twists, relations)


@dataclass
class CohomologyTable:
    """h^i(P^r, I_X(j)) for i = 1,2,3 over a degree window."""

    window: tuple[int, int]
    h1: list[int]
    h2: list[int]
    h3: list[int]
    e: int | None
    N: int | None  # None encodes -infinity
    a_hilbert: HilbertSeries | None = field(default=None, repr=False)

    def value(self, i: int, j: int) -> int:
        lo, hi = self.window
        if not lo <= j <= hi:
            raise CohomologyError(f"twist {j} outside window {self.window}")
        return (self.h1, self.h2, self.h3)[i - 1][j - lo]

    def h0_structure_sheaf(self, j: int) -> int:
        """h^0(X, O_X(j)) = dim A_j + h^1(I_X(j))."""
        if self.a_hilbert is None:
            raise CohomologyError("no coordinate-ring Hilbert series attached")
        return self.a_hilbert.hf(j) + self.value(1, j)

    def to_json(self) -> dict:
        return {
            "window": list(self.window),
            "h1": list(self.h1),
            "h2": list(self.h2),
            "h3": list(self.h3),
            "e": self.e,
            "N": "-inf" if self.N is None else self.N,
        }

    def render_text(self) -> str:
        lo, hi = self.window
        head = ["j"] + [str(j) for j in range(lo, hi + 1)]
        rows = [
            ["h1(I(j))"] + [str(v) for v in self.h1],
            ["h2(I(j))"] + [str(v) for v in self.h2],
            ["h3(I(j))"] + [str(v) for v in self.h3],
        ]
        widths = [
            max(len(head[k]), *(len(r[k]) for r in rows)) + 2
            for k in range(len(head))
        ]
        lines = ["".join(h.rjust(widths[k]) for k, h in enumerate(head))]
        for r in rows:
            lines.append("".join(c.rjust(widths[k]) for k, c in enumerate(r)))
        lines.append(f"e = {self.e}   N = {'-inf' if self.N is None else self.N}")
        return "\n".join(lines)


def default_window(d: int, r: int) -> tuple[int, int]:
    return (-(d + 2), d - r + 4)


def sheaf_cohomology_table(
    I: Ideal,
    window: tuple[int, int] | None = None,
    res: FreeResolution | None = None,
    check_saturated: bool = True,
) -> CohomologyTable:
    ring = I.ring
    if check_saturated and not is_saturated(I):
        raise CohomologyError("ideal is not saturated")
    if res is None:
        res = minimal_resolution(I)
    dim, deg = I.dim_degree()
    r = ring.nvars - 1
    if window is None:
        window = default_window(deg, r)
    lo, hi = window
    mods = [deficiency_module(I, i, res) for i in (1, 2, 3)]
    cols = {i: [mods[i - 1].hf(-j) for j in range(lo, hi + 1)] for i in (1, 2, 3)}
    e = _stable_value(mods[1], deg)
    N = _index_of_normality(mods[0], res)
    return CohomologyTable(
        window=(lo, hi),
        h1=cols[1],
        h2=cols[2],
        h3=cols[3],
        e=e,
        N=N,
        a_hilbert=I.hilbert_series(),
    )


def _stable_value(k2: DeficiencyModule, deg: int) -> int:
    a = k2.hf(deg + 1)
    b = k2.hf(deg + 2)
    if a != b:
        raise CohomologyError("second deficiency module has not stabilized")
    return a


def _index_of_normality(k1: DeficiencyModule, res: FreeResolution):
    reg = res.betti_table().reg_subscheme
    best = None
    for j in range(1, reg + 1):
        if k1.hf(-j):
            best = j
    return best


def e_invariant(I: Ideal, res: FreeResolution | None = None) -> int:
    if res is None:
        res = minimal_resolution(I)
    dim, deg = I.dim_degree()
    if dim != 2:
        raise CohomologyError("e-invariant is defined for surfaces here")
    return _stable_value(deficiency_module(I, 2, res), deg)


def index_of_normality(I: Ideal, res: FreeResolution | None = None):
    """sup{j : h^1(I_X(j)) != 0}, or None for -infinity."""
    if res is None:
        res = minimal_resolution(I)
    return _index_of_normality(deficiency_module(I, 1, res), res)


def random_linear_form(ring: PolyRing, rng: SplitMix64) -> Polynomial:
    fld = ring.field
    while True:
        coeffs = [fld.random(rng) for _ in range(ring.nvars)]
        if any(c != fld.zero for c in coeffs):
            break
    out: dict = {}
    for i, c in enumerate(coeffs):
        if c != fld.zero:
            out[ring.enc.var_code[i]] = c
    return Polynomial(ring, out)


def hyperplane_section(I: Ideal, h: Polynomial) -> Ideal:
    """Saturated ideal of X ∩ {h = 0} in one fewer variable."""
    ring = I.ring
    if not isinstance(ring.field, PrimeField):
        raise CohomologyError("hyperplane sections require a prime field")
    if h.ring is not ring or not h.d or h.degree() != 1 or not h.is_homogeneous():
        raise CohomologyError("section by a nonzero linear form required")
    p = ring.field.p
    n = ring.nvars
    coeffs = [0] * n
    for exps, c in h.terms():
        coeffs[exps.index(1)] = c
    pivot = max(i for i, c in enumerate(coeffs) if c)
    B = np.eye(n, dtype=np.int64)
    B[pivot, :] = coeffs
    aug = np.hstack([B, np.eye(n, dtype=np.int64)])
    R, piv = rref_modp(aug, p)
    if piv[:n] != list(range(n)):
        raise CohomologyError("degenerate coordinate change")
    Binv = R[:, n:]
    names = [nm for i, nm in enumerate(ring.names) if i != pivot]
    section_ring = PolyRing(ring.field, names)
    zvars = section_ring.gens()
    images = {}
    for i in range(n):
        acc = section_ring.zero()
        zi = 0
        for k in range(n):
            if k == pivot:
                continue
            c = int(Binv[i, k])
            if c:
                acc = acc + zvars[zi].scale(c)
            zi += 1
        images[i] = acc
    gens = [g.substitute(images, section_ring) for g in I.gens]
    raw = Ideal(section_ring, gens)
    sat, _ = saturate(raw, irrelevant_ideal(section_ring))
    return sat


def sectional_regularity(I: Ideal, samples: int = 3, seed: int = 0):
    """min over sampled hyperplane sections of reg(section); (min, values)."""
    if samples < 1:
        raise CohomologyError("at least one sample required")
    values = []
    for k in range(samples):
        rng = derived_rng(seed, 101, k)
        h = random_linear_form(I.ring, rng)
        section = hyperplane_section(I, h)
        table = minimal_resolution(section).betti_table()
        values.append(table.reg_subscheme)
    return min(values), values


def sectional_genus(I: Ideal, seed: int = 0) -> int:
    """1 - constant term of the Hilbert polynomial of a generic curve section."""
    dim, _ = I.dim_degree()
    if dim != 2:
        raise CohomologyError("sectional genus is defined for surfaces here")
    rng = derived_rng(seed, 202)
    h = random_linear_form(I.ring, rng)
    section = hyperplane_section(I, h)
    hs = section.hilbert_series()
    return 1 - hs.hilbert_polynomial_value(0)


def depth_of(I: Ideal, res: FreeResolution | None = None) -> int:
    if res is None:
        res = minimal_resolution(I)
    return res.betti_table().depth


def tau(IX: Ideal, IY: Ideal, res_x=None, res_y=None) -> tuple[int, int]:
    """(depth of the surface ring, depth of the ring of the union with the plane)."""
    return depth_of(IX, res_x), depth_of(IY, res_y)


def classify_degree_r_plus_1(I: Ideal, seed: int = 0, res=None):
    """Case 1..9 for surfaces of degree r+1 in P^r, plus the invariant tuple."""
    from .formulas import DEGREE_R1_CASES

    ring = I.ring
    r = ring.nvars - 1
    if r < 5:
        raise CohomologyError("classification needs ambient dimension >= 5")
    dim, deg = I.dim_degree()
    if dim != 2 or deg != r + 1:
        raise CohomologyError("classification needs a surface of degree r+1")
    if res is None:
        res = minimal_resolution(I)
    sreg, _ = sectional_regularity(I, samples=3, seed=seed)
    depth = res.betti_table().depth
    sigma = sectional_genus(I, seed=seed)
    e = e_invariant(I, res)
    k1 = deficiency_module(I, 1, res)
    h1a1 = k1.hf(-1)
    h1a2 = k1.hf(-2)
    invariants = (sreg, depth, sigma, e, h1a1, h1a2)
    for case, s_, d_, g_, e_, a1_, (kind, a2_) in DEGREE_R1_CASES:
        if (sreg, depth, sigma, e, h1a1) != (s_, d_, g_, e_, a1_):
            continue
        if kind == "eq" and h1a2 == a2_:
            return case, invariants
        if kind == "le" and h1a2 <= a2_:
            return case, invariants
    raise CohomologyError(f"invariants {invariants} match no classification case")


def section_module_dims_bruteforce(I: Ideal, j: int, k: int) -> int:
    """dim Hom(m^k, S/I)_j by direct linear algebra (independent oracle).

    For k large this is H^0(X, O_X(j)); callers should verify stabilization
    in k.  Used to cross-check the deficiency-module route.
    """
    ring = I.ring
    p = ring.field.p
    gb = I.groebner()
    enc = ring.enc

    def std_basis(d):
        leads = [g.lead_code() for g in gb]
        out = []
        for code in monomials_of_degree(ring, d):
            if not any(enc.divides(lt, code) for lt in leads):
                out.append(code)
        return out

    def nf_vector(poly: Polynomial, basis_index):
        v = [0] * len(basis_index)
        red = gb.reduce(poly)
        for code, c in red.d.items():
            v[basis_index[code]] = c
        return v

    gens_k = monomials_of_degree(ring, k)
    basis_jk = std_basis(j + k)
    idx_jk = {c: i for i, c in enumerate(basis_jk)}
    basis_jk1 = std_basis(j + k + 1)
    idx_jk1 = {c: i for i, c in enumerate(basis_jk1)}
    nunk = len(gens_k) * len(basis_jk)
    if nunk == 0:
        return 0
    # multiplication matrices x_a : A_{j+k} -> A_{j+k+1}
    mult = []
    for a in range(ring.nvars):
        xa = ring.variable(a)
        cols = [nf_vector(Polynomial(ring, {code: 1}) * xa, idx_jk1) for code in basis_jk]
        mult.append(np.array(cols, dtype=np.int64).T if cols else
                    np.zeros((len(basis_jk1), 0), dtype=np.int64))
    rows = []
    gidx = {c: i for i, c in enumerate(gens_k)}
    nb = len(basis_jk)
    for gi, mu in enumerate(gens_k):
        exps = enc.decode(mu)
        for b in range(ring.nvars):
            if not exps[b]:
                continue
            for a in range(b):
                # mu' = x_a * mu / x_b
                nexps = list(exps)
                nexps[b] -= 1
                nexps[a] += 1
                mu2 = enc.encode(tuple(nexps))
                gj = gidx[mu2]
                # x_a v_mu = x_b v_mu2
                block = np.zeros((len(basis_jk1), nunk), dtype=np.int64)
                block[:, gi * nb : (gi + 1) * nb] = mult[a]
                block[:, gj * nb : (gj + 1) * nb] -= mult[b]
                rows.append(block % p)
    if not rows:
        return nunk
    M = np.vstack(rows)
    ns = nullspace_modp(M, p)
    return ns.shape[0]
