"""Minimal graded free resolutions and Betti tables.

Levels are built by iterated syzygy computation: at each level the
candidate syzygies are processed in degree order against a growing module
Groebner basis (Schreyer-induced order), so exactly a minimal generating
set survives.  The resulting complex is the minimal free resolution; no
separate minimization pass is needed.
"""

from __future__ import annotations

from itertools import combinations_with_replacement
from math import comb

from .field import PrimeField
from .groebner import GroebnerError, Ideal, _Engine, reduce_full
from .linalg import rank_modp
from .modules import ModuleContext, level_pass, module_buchberger
from .ring import PolyRing, Polynomial, RingError


class ResolutionError(ValueError):
    pass


def monomials_of_degree(ring: PolyRing, d: int) -> list[int]:
    """Codes of all degree-d monomials, in descending monomial order."""
    if d < 0:
        return []
    n = ring.nvars
    codes = []
    enc = ring.enc
    for combo in combinations_with_replacement(range(n), d):
        exps = [0] * n
        for i in combo:
            exps[i] += 1
        codes.append(enc.encode(exps))
    codes.sort(reverse=True)
    return codes


class GradedMatrix:
    """Columns are homogeneous vectors: deg entry[i][j] = col[j] - row[i]."""

    def __init__(self, ring: PolyRing, row_twists, col_twists, entries: dict):
        self.ring = ring
        self.row_twists = list(row_twists)
        self.col_twists = list(col_twists)
        self.entries = {k: v for k, v in entries.items() if v.d}

    @property
    def nrows(self) -> int:
        return len(self.row_twists)

    @property
    def ncols(self) -> int:
        return len(self.col_twists)

    def entry(self, i: int, j: int) -> Polynomial:
        return self.entries.get((i, j), self.ring.zero())

    def check_degrees(self) -> bool:
        for (i, j), f in self.entries.items():
            want = self.col_twists[j] - self.row_twists[i]
            if f.degree() != want or not f.is_homogeneous():
                return False
        return True

    def compose(self, other: "GradedMatrix") -> "GradedMatrix":
        """self @ other (apply self after other)."""
        if other.row_twists != self.col_twists:
            raise ResolutionError("twist mismatch in composition")
        out: dict = {}
        by_col: dict = {}
        for (k, j), f in other.entries.items():
            by_col.setdefault(j, []).append((k, f))
        by_row: dict = {}
        for (i, k), f in self.entries.items():
            by_row.setdefault(k, []).append((i, f))
        for j, col in by_col.items():
            for k, f in col:
                for i, g in by_row.get(k, ()):
                    prod = g * f
                    if not prod.d:
                        continue
                    cur = out.get((i, j))
                    out[(i, j)] = prod if cur is None else cur + prod
        return GradedMatrix(self.ring, self.row_twists, other.col_twists, out)

    def is_zero(self) -> bool:
        return not self.entries

    def graded_piece(self, d: int):
        """Dense F_p matrix of the degree-d piece of the map."""
        ring = self.ring
        if not isinstance(ring.field, PrimeField):
            raise ResolutionError("graded pieces require a prime field")
        import numpy as np

        row_blocks = []
        row_index: dict = {}
        for i, t in enumerate(self.row_twists):
            mons = monomials_of_degree(ring, d - t)
            base = len(row_index)
            for k, code in enumerate(mons):
                row_index[(i, code)] = base + k
            row_blocks.append(mons)
        col_count = 0
        cols = []
        for j, t in enumerate(self.col_twists):
            mons = monomials_of_degree(ring, d - t)
            cols.append(mons)
            col_count += len(mons)
        M = np.zeros((len(row_index), col_count), dtype=np.int64)
        enc = ring.enc
        one = enc.one
        cmajor = 0
        for j, mons in enumerate(cols):
            col_entries = [
                (i, f) for (i, jj), f in self.entries.items() if jj == j
            ]
            for k, nu in enumerate(mons):
                off = nu - one
                cidx = cmajor + k
                for i, f in col_entries:
                    for code, c in f.d.items():
                        ridx = row_index.get((i, code + off))
                        if ridx is None:
                            raise ResolutionError("inhomogeneous matrix entry")
                        M[ridx, cidx] = c
            cmajor += len(mons)
        return M

    def graded_rank(self, d: int) -> int:
        M = self.graded_piece(d)
        if M.size == 0:
            return 0
        return rank_modp(M, self.ring.field.p)

    def columns(self) -> list[list[Polynomial]]:
        out = [
            [self.entry(i, j) for i in range(self.nrows)] for j in range(self.ncols)
        ]
        return out


class FreeResolution:
    """0 <- S/I <- F_0 <- F_1 <- ...; matrices[i] maps F_{i+1} -> F_i."""

    def __init__(self, ring: PolyRing, matrices: list[GradedMatrix]):
        self.ring = ring
        self.matrices = list(matrices)

    @property
    def length(self) -> int:
        return len(self.matrices)

    def twists(self, i: int) -> list[int]:
        """Generator degrees of F_i (F_0 = S)."""
        if i == 0:
            return [0]
        if i <= len(self.matrices):
            return list(self.matrices[i - 1].col_twists)
        return []

    def is_minimal(self) -> bool:
        for mat in self.matrices:
            for (i, j), f in mat.entries.items():
                if mat.col_twists[j] == mat.row_twists[i]:
                    return False
        return True

    def composition_is_zero(self) -> bool:
        for a, b in zip(self.matrices, self.matrices[1:]):
            if not a.compose(b).is_zero():
                return False
        return True

    def exactness_defect(self, i: int, d: int) -> int:
        """dim ker(M_i)_d - dim im(M_{i+1})_d at F_i in degree d (i >= 1)."""
        mat = self.matrices[i - 1]
        dim_source = sum(
            comb(d - t + self.ring.nvars - 1, self.ring.nvars - 1)
            for t in mat.col_twists
            if d - t >= 0
        )
        rank_i = mat.graded_rank(d)
        kernel = dim_source - rank_i
        image = (
            self.matrices[i].graded_rank(d) if i < len(self.matrices) else 0
        )
        return kernel - image

    def betti_table(self) -> "BettiTable":
        if not self.is_minimal():
            raise ResolutionError("Betti table requires a minimal resolution")
        entries: dict = {(0, 0): 1}
        for i in range(1, self.length + 1):
            for t in self.twists(i):
                key = (i, t - i)
                entries[key] = entries.get(key, 0) + 1
        return BettiTable(entries, self.ring.nvars)


class BettiTable:
    """beta_{i,j} = dim Tor_i(k, S/I)_{i+j} plus derived invariants."""

    def __init__(self, entries: dict, nvars: int):
        self.entries = {k: v for k, v in entries.items() if v}
        self.nvars = nvars

    def beta(self, i: int, j: int) -> int:
        return self.entries.get((i, j), 0)

    @property
    def pd(self) -> int:
        return max((i for i, _ in self.entries), default=0)

    @property
    def reg_module(self) -> int:
        return max((j for _, j in self.entries), default=0)

    @property
    def reg_subscheme(self) -> int:
        return self.reg_module + 1

    @property
    def depth(self) -> int:
        return self.nvars - self.pd

    def rows(self):
        """Sorted row indices j >= 1 with a nonzero entry somewhere."""
        return sorted({j for (i, j) in self.entries if i >= 1})

    def strand(self, j: int, width: int | None = None) -> list[int]:
        w = width if width is not None else self.pd
        return [self.beta(i, j) for i in range(1, w + 1)]

    def n2p_index(self) -> int:
        p = 0
        for i in range(1, self.pd + 1):
            if any(jj != 1 and ii == i for (ii, jj) in self.entries):
                return p
            p = i
        return p

    def total_betti(self, i: int) -> int:
        return sum(v for (ii, _), v in self.entries.items() if ii == i)

    def euler_numerator(self) -> list:
        """Alternating sum of twist polynomials, over (1-t)^nvars."""
        coeffs: dict = {}
        for (i, j), b in self.entries.items():
            t = i + j
            coeffs[t] = coeffs.get(t, 0) + (-1) ** i * b
        top = max(coeffs, default=0)
        return [coeffs.get(k, 0) for k in range(top + 1)]

    def __eq__(self, other):
        return isinstance(other, BettiTable) and self.entries == other.entries

    def to_json(self) -> dict:
        rows = []
        for j in self.rows():
            rows.append({"j": j, "beta": self.strand(j)})
        return {
            "pd": self.pd,
            "reg_module": self.reg_module,
            "reg_subscheme": self.reg_subscheme,
            "depth": self.depth,
            "rows": rows,
        }

    def render_text(self) -> str:
        pd = max(self.pd, 1)
        reg = max(self.reg_module, 1)
        head = ["i"] + [str(i) for i in range(1, pd + 1)]
        lines = []
        widths = [max(8, len(h) + 2) for h in head]
        grid = []
        for j in range(1, reg + 1):
            row = [f"beta_i,{j}"] + [str(self.beta(i, j)) for i in range(1, pd + 1)]
            grid.append(row)
        for row in grid:
            for k, cell in enumerate(row):
                if k >= len(widths):
                    widths.append(len(cell) + 2)
                widths[k] = max(widths[k], len(cell) + 2)
        out = ["".join(h.rjust(widths[k]) for k, h in enumerate(head))]
        for row in grid:
            out.append("".join(cell.rjust(widths[k]) for k, cell in enumerate(row)))
        return "\n".join(out)


def _scalar_level_pass(ring: PolyRing, candidates: list[dict]):
    """Minimal ideal generators plus syzygies, degree-synchronized."""
    eng = _Engine(ring, track=True)
    fld = ring.field
    order = sorted(
        range(len(candidates)),
        key=lambda i: (max(ring.wdeg(m) for m in candidates[i]), i),
    )
    kept: list[dict] = []
    pos = 0
    while pos < len(order) or eng.pairs:
        cand_deg = None
        if pos < len(order):
            cand = candidates[order[pos]]
            cand_deg = max(ring.wdeg(m) for m in cand)
        pair_deg = eng.min_pair_degree()
        if pair_deg is not None and (cand_deg is None or pair_deg <= cand_deg):
            eng.step()
            continue
        pos += 1
        rem = eng.normal_form(dict(cand))
        if not rem:
            continue
        lc = rem[max(rem)]
        if lc != fld.one:
            inv = fld.inv(lc)
            if isinstance(fld, PrimeField):
                rem = {m: (c * inv) % fld.p for m, c in rem.items()}
            else:
                rem = {m: fld.mul(c, inv) for m, c in rem.items()}
        shadow = {(ring.enc.one, len(kept)): fld.one}
        kept.append(rem)
        eng.add_generator(rem, None, shadow)
    return kept, eng.syzygies


def minimal_resolution(I: Ideal) -> FreeResolution:
    """Minimal free resolution of S/I for a homogeneous proper ideal."""
    ring = I.ring
    if not I.is_homogeneous():
        raise ResolutionError("minimal resolution requires a homogeneous ideal")
    if any(not g.d for g in I.gens):
        raise ResolutionError("zero generator")
    if I.gens and I.contains(ring.one()):
        raise ResolutionError("unit ideal has no minimal resolution of S/I")
    kept, syzygies = _scalar_level_pass(ring, [g.d for g in I.gens])
    matrices: list[GradedMatrix] = []
    if not kept:
        return FreeResolution(ring, matrices)
    col_twists = [max(ring.wdeg(m) for m in d) for d in kept]
    entries = {(0, j): Polynomial(ring, d) for j, d in enumerate(kept)}
    matrices.append(GradedMatrix(ring, [0], col_twists, entries))
    ctx = ModuleContext(
        ring, col_twists, shifts=[max(d) for d in kept],
        tails=[(-c,) for c in range(len(kept))],
    )
    candidates = [ctx.keyed_from_shadow(sh) for sh in syzygies]
    level = 1
    while candidates:
        level += 1
        if level > ring.nvars + 1:
            raise ResolutionError("resolution exceeded the syzygy bound")
        kept_elems, syzygies = level_pass(ctx, candidates)
        if not kept_elems:
            break
        prev_twists = ctx.twists
        entries = {}
        new_twists = []
        for j, elem in enumerate(kept_elems):
            new_twists.append(ctx.element_degree(elem))
            for col_poly_idx, poly in enumerate(ctx.to_columns(elem)):
                if poly.d:
                    entries[(col_poly_idx, j)] = poly
        matrices.append(GradedMatrix(ring, prev_twists, new_twists, entries))
        ctx = ctx.child(kept_elems)
        candidates = [ctx.keyed_from_shadow(sh) for sh in syzygies]
    return FreeResolution(ring, matrices)


def syzygy_matrix(M: GradedMatrix) -> GradedMatrix:
    """Minimal generators of ker(M) as the columns of a graded matrix."""
    ring = M.ring
    ctx = ModuleContext(ring, M.row_twists)
    columns = ctx.from_columns(M.columns())
    for elem, j in zip(columns, range(M.ncols)):
        if elem and not ctx.is_homogeneous(elem):
            raise ResolutionError(f"column {j} is not homogeneous")
    eng = module_buchberger(ctx, columns, track=True)
    gen_ctx = ModuleContext(ring, M.col_twists)
    candidates = [gen_ctx.keyed_from_shadow(sh) for sh in eng.syzygies]
    kept, _ = level_pass(gen_ctx, candidates)
    entries = {}
    twists = []
    for j, elem in enumerate(kept):
        twists.append(gen_ctx.element_degree(elem))
        for i, poly in enumerate(gen_ctx.to_columns(elem)):
            if poly.d:
                entries[(i, j)] = poly
    return GradedMatrix(ring, M.col_twists, twists, entries)


def module_resolution_twists(ring: PolyRing, gen_twists, relations: list[dict]):
    """Twist lists of a minimal free resolution of coker(relations).

    `relations` are elements of the free module on generators with the given
    twists (plain order); the presentation is assumed minimal in degree 0
    (prune constants first).  Returns [twists of F_0, F_1, ...].
    """
    levels = [list(gen_twists)]
    ctx = ModuleContext(ring, gen_twists)
    candidates = [dict(rel) for rel in relations if rel]
    while candidates:
        kept, syzygies = level_pass(ctx, candidates)
        if not kept:
            break
        levels.append([ctx.element_degree(e) for e in kept])
        ctx = ctx.child(kept)
        candidates = [ctx.keyed_from_shadow(sh) for sh in syzygies]
    return levels


def betti_table(res: FreeResolution) -> BettiTable:
    return res.betti_table()


def regularity_of_subscheme(table: BettiTable) -> int:
    return table.reg_subscheme


def euler_check(res: FreeResolution, hilbert) -> bool:
    """Alternating twist sum against the Hilbert series numerator."""
    table = res.betti_table()
    a = table.euler_numerator()
    b = list(hilbert.numerator)
    while a and a[-1] == 0:
        a.pop()
    while b and b[-1] == 0:
        b.pop()
    return a == b
