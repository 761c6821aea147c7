"""Elimination, implicitization, intersection, quotient and saturation.

Elimination moves the ideal into a ring with a leading block of the
variables being dropped (grevlex inside each block).  The implicitization
ring is graded by weights that make every x_i - g_i homogeneous, so the
whole computation proceeds degree by degree even though it is "affine".
Intersections append one auxiliary variable of weight 0 on top of a block
order; colon ideals come from module syzygies.
"""

from __future__ import annotations

from .field import PrimeField
from .groebner import (
    GroebnerBasis,
    GroebnerError,
    Ideal,
    buchberger,
    ideal_equal,
    interreduce,
)
from .modules import ModuleContext, module_syzygies
from .ring import GREVLEX, MonomialOrder, PolyRing, Polynomial, RingError


def transport(f: Polynomial, target: PolyRing) -> Polynomial:
    """Move f to a ring that contains (by name) every variable f uses."""
    src = f.ring
    if src is target:
        return f
    mapping = [target.var_index.get(nm) for nm in src.names]
    out: dict = {}
    dec = src.enc.decode
    tgt_nv = target.nvars
    for code, c in f.d.items():
        exps = dec(code)
        tgt_exps = [0] * tgt_nv
        for i, e in enumerate(exps):
            if not e:
                continue
            j = mapping[i]
            if j is None:
                raise RingError(
                    f"variable {src.names[i]} does not exist in the target ring"
                )
            tgt_exps[j] = e
        out[target.enc.encode(tgt_exps)] = target.field.normalize(c)
    return Polynomial(target, out)


def _seed_gb(ring: PolyRing, dicts: list[dict]) -> Ideal:
    """Ideal whose generators are an already-reduced Groebner basis."""
    polys = [Polynomial(ring, d) for d in dicts]
    ideal = Ideal(ring, polys)
    ideal._gb[id(ring)] = GroebnerBasis(ring, polys)
    return ideal


def eliminate(I: Ideal, var_names, affine: bool = False) -> Ideal:
    """I ∩ k[kept vars]; `affine` skips the homogeneity precondition."""
    ring = I.ring
    drop = [nm if isinstance(nm, str) else ring.names[nm] for nm in var_names]
    for nm in drop:
        if nm not in ring.var_index:
            raise RingError(f"unknown variable {nm}")
    drop_set = set(drop)
    keep = [nm for nm in ring.names if nm not in drop_set]
    if not drop_set:
        return I
    if not affine and not I.is_homogeneous():
        raise GroebnerError("inhomogeneous input to homogeneous-mode eliminate")
    order = MonomialOrder("block", [(len(drop), "grevlex"), (len(keep), "grevlex")])
    wmap = dict(zip(ring.names, ring.weights))
    names = tuple(drop) + tuple(keep)
    elim_ring = PolyRing(ring.field, names, order, [wmap[nm] for nm in names])
    gens = [transport(g, elim_ring) for g in I.gens]
    basis, _, _ = buchberger(gens, elim_ring)
    basis = interreduce(basis, elim_ring)
    keep_ring = PolyRing(ring.field, keep, GREVLEX, [wmap[nm] for nm in keep])
    ndrop = len(drop)
    kept_dicts = []
    for d in basis:
        lead_exps = elim_ring.enc.decode(max(d))
        if any(lead_exps[i] for i in range(ndrop)):
            continue
        kept_dicts.append(transport(Polynomial(elim_ring, d), keep_ring).d)
    return _seed_gb(keep_ring, kept_dicts)


def _multidegree(f: Polynomial, groups) -> tuple:
    """Degree of f in each variable group; error if not multihomogeneous."""
    degs = None
    for exps, _ in f.terms():
        cur = tuple(sum(exps[i] for i in grp) for grp in groups)
        if degs is None:
            degs = cur
        elif degs != cur:
            raise GroebnerError("image is not homogeneous in each parameter pair")
    return degs


def kernel_of_map(images, var_names, param_groups=None) -> Ideal:
    """Vanishing ideal of the closure of the image of a monomial/poly map.

    images live in a parameter ring whose variables split into groups
    (consecutive pairs by default); each image must be homogeneous in every
    group.  The parameters are eliminated from (x_i - g_i) and the result is
    saturated with respect to the irrelevant ideal, with saturatedness
    verified.
    """
    if not images:
        raise GroebnerError("no images")
    pring = images[0].ring
    for g in images:
        if g.ring is not pring:
            raise RingError("images live in different rings")
        if not g.d:
            raise GroebnerError("zero image")
    if len(images) != len(var_names):
        raise GroebnerError("one image per target variable required")
    if param_groups is None:
        if pring.nvars % 2:
            param_groups = [tuple(range(pring.nvars))]
        else:
            param_groups = [(i, i + 1) for i in range(0, pring.nvars, 2)]
    multidegs = [_multidegree(g, param_groups) for g in images]
    classes = sorted(set(multidegs))
    if len(classes) > 2:
        raise GroebnerError("more than two image bidegree classes")
    if len(classes) == 2:
        # non-proportional classes guarantee a standard-homogeneous kernel
        d1, d2 = classes
        if all(d1[i] * d2[j] == d1[j] * d2[i] for i in range(len(d1)) for j in range(len(d1))):
            raise GroebnerError("image bidegree classes are proportional")
    field = pring.field
    names = tuple(pring.names) + tuple(var_names)
    weights = [1] * pring.nvars + [g.degree() for g in images]
    order = MonomialOrder(
        "block", [(pring.nvars, "grevlex"), (len(var_names), "grevlex")]
    )
    big = PolyRing(field, names, order, weights)
    gens = []
    for nm, g in zip(var_names, images):
        gens.append(big.variable(nm) - transport(g, big))
    basis, _, _ = buchberger(gens, big)
    basis = interreduce(basis, big)
    target = PolyRing(field, var_names, GREVLEX)
    np = pring.nvars
    kept = []
    for d in basis:
        if any(big.enc.decode(max(d))[:np]):
            continue
        kept.append(transport(Polynomial(big, d), target).d)
    raw = _seed_gb(target, kept)
    for g in raw.gens:
        if not g.is_homogeneous():
            raise GroebnerError("elimination ideal is not homogeneous")
    sat, _ = saturate(raw, irrelevant_ideal(target))
    return sat


def irrelevant_ideal(ring: PolyRing) -> Ideal:
    return Ideal(ring, ring.gens())


def intersect(I: Ideal, J: Ideal) -> Ideal:
    """I ∩ J by one weight-0 auxiliary variable atop a block order."""
    ring = I.ring
    if J.ring is not ring:
        raise RingError("ideals live in different rings")
    if not I.gens:
        return J
    if not J.gens:
        return I
    aux = "t@"
    names = (aux,) + ring.names
    order = MonomialOrder("block", [(1, "grevlex"), (ring.nvars, "grevlex")])
    big = PolyRing(ring.field, names, order, (0,) + tuple(ring.weights))
    t = big.variable(aux)
    one = big.one()
    gens = [t * transport(f, big) for f in I.gens]
    gens += [(one - t) * transport(g, big) for g in J.gens]
    basis, _, _ = buchberger(gens, big)
    basis = interreduce(basis, big)
    kept = []
    for d in basis:
        if big.enc.decode(max(d))[0]:
            continue
        kept.append(transport(Polynomial(big, d), ring).d)
    return _seed_gb(ring, kept)


def quotient(I: Ideal, J: Ideal) -> Ideal:
    """(I : J) = {f : f*J ⊆ I} via one module syzygy computation."""
    ring = I.ring
    if J.ring is not ring:
        raise RingError("ideals live in different rings")
    if not J.gens:
        raise GroebnerError("colon by the zero ideal")
    if not I.gens:
        return Ideal(ring, [])
    m = len(J.gens)
    ctx = ModuleContext(ring, [0] * m)
    columns = [list(J.gens)]
    for g in I.gens:
        for slot in range(m):
            col = [ring.zero()] * m
            col[slot] = g
            columns.append(col)
    elements = ctx.from_columns(columns)
    syz = module_syzygies(ctx, elements)
    gens = list(I.gens)
    for shadow in syz:
        d = {code: c for (code, idx), c in shadow.items() if idx == 0}
        if d:
            gens.append(Polynomial(ring, d))
    out = Ideal(ring, gens)
    reduced = interreduce([g.d for g in out.groebner()], ring)
    return _seed_gb(ring, reduced)


def saturate(I: Ideal, J: Ideal):
    """(I : J^∞) and the stabilization exponent."""
    current = I
    exponent = 0
    while True:
        nxt = quotient(current, J)
        if ideal_equal(nxt, current):
            return current, exponent
        current = nxt
        exponent += 1


def is_saturated(I: Ideal) -> bool:
    return ideal_equal(quotient(I, irrelevant_ideal(I.ring)), I)
