"""Surface constructors, secant-line probes and Pluecker-span statistics.

Scrolls come from 2x2 minors of catalecticant blocks.  The two families of
maximal-sectional-regularity surfaces are built from their parametrizations
by implicitization: divisors on the Segre threefold in P^5, and projections
of S(a,b) to P^{a+3} whose extremal plane is {x_0 = ... = x_a = 0} by
construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .field import PrimeField, SplitMix64, derived_rng
from .groebner import GroebnerError, Ideal
from .idealops import intersect, is_saturated, kernel_of_map
from .linalg import nullspace_modp, rref_modp
from .parse import parse_polynomial
from .ring import GREVLEX, PolyRing, Polynomial, RingError


class SurfaceError(ValueError):
    pass


@dataclass(frozen=True)
class SurfaceSpec:
    """Construction metadata: family, ambient dimension, expected degree."""

    kind: str  # "type1" | "type2" | "scroll"
    r: int
    d: int
    a: int | None = None
    b: int | None = None
    f_text: str | None = None
    scroll_type: tuple | None = None
    seed: int = 0


class Line:
    """A line in P^r spanned by two independent points."""

    def __init__(self, p, q, p_prime: int):
        self.p = [int(c) % p_prime for c in p]
        self.q = [int(c) % p_prime for c in q]
        self.char = p_prime
        M = np.array([self.p, self.q], dtype=np.int64)
        _, piv = rref_modp(M, p_prime)
        if len(piv) != 2:
            raise SurfaceError("degenerate line: dependent points")

    def plucker(self) -> list[int]:
        """p_{ij} = p_i q_j - p_j q_i for i < j, lexicographic index order."""
        n = len(self.p)
        pr = self.char
        out = []
        for i in range(n):
            for j in range(i + 1, n):
                out.append((self.p[i] * self.q[j] - self.p[j] * self.q[i]) % pr)
        return out

    def restrict(self, f: Polynomial, st_ring: PolyRing) -> Polynomial:
        """f(s*p + t*q) as a binary form."""
        s, t = st_ring.gens()
        images = {}
        for i in range(f.ring.nvars):
            images[i] = s.scale(self.p[i]) + t.scale(self.q[i])
        return f.substitute(images, st_ring)


@dataclass
class SecantSample:
    line: Line
    length: int | None  # None encodes infinite intersection
    plucker: list[int] = field(default_factory=list)


def scroll_ideal(scroll_type, char_field: PrimeField | None = None,
                 ring: PolyRing | None = None) -> Ideal:
    """2x2 minors of the catalecticant block matrix of S(a_1,...,a_k)."""
    a = tuple(int(x) for x in scroll_type)
    if not a or any(x < 0 for x in a) or all(x == 0 for x in a):
        raise SurfaceError(f"invalid scroll type {a}")
    nvars = sum(a) + len(a)
    if ring is None:
        from .field import DEFAULT_PRIME, PrimeField as PF

        fld = char_field or PF(DEFAULT_PRIME)
        ring = PolyRing(fld, [f"x{i}" for i in range(nvars)])
    if ring.nvars != nvars:
        raise SurfaceError("ring has the wrong number of variables")
    cols = []
    base = 0
    for ai in a:
        for l in range(ai):
            cols.append((base + l, base + l + 1))
        base += ai + 1
    gens = []
    xs = ring.gens()
    for c1 in range(len(cols)):
        for c2 in range(c1 + 1, len(cols)):
            (i1, i2), (j1, j2) = cols[c1], cols[c2]
            gens.append(xs[i1] * xs[j2] - xs[i2] * xs[j1])
    ideal = Ideal(ring, gens)
    dim, deg = ideal.dim_degree()
    if (dim, deg) != (len(a), sum(a)):
        raise SurfaceError(
            f"scroll validation failed: got dim/deg {(dim, deg)}"
        )
    return ideal


# the smooth family in P^5: the two u-coordinates sweep the line directrix,
# the four v-coordinates a degree-(d-1) curve; published exponents for the
# u-power at d = 8, 9, 10, and d-1 otherwise (the image is the same for any
# pure power).
_TYPE1_U_POWER = {8: 7, 9: 7, 10: 9}


def type1_parametrization(d: int, param_ring: PolyRing) -> list[Polynomial]:
    if d < 5:
        raise SurfaceError("smooth-family surfaces need degree >= 5")
    e = _TYPE1_U_POWER.get(d, d - 1)
    s, t, u, v = param_ring.gens()
    return [
        u ** e * s,
        u ** e * t,
        v * s ** (d - 1),
        v * s ** (d - 2) * t,
        v * s * t ** (d - 2),
        v * t ** (d - 1),
    ]


def type1_surface(d: int, fld: PrimeField | None = None) -> Ideal:
    """Degree-d surface on the Segre threefold in P^5 (maximal family I)."""
    from .field import DEFAULT_PRIME, PrimeField as PF

    fld = fld or PF(DEFAULT_PRIME)
    param_ring = PolyRing(fld, ["s", "t", "u", "v"])
    images = type1_parametrization(d, param_ring)
    ideal = kernel_of_map(images, [f"x{i}" for i in range(6)])
    dim, deg = ideal.dim_degree()
    if (dim, deg) != (2, d):
        raise SurfaceError(f"degree validation failed: {(dim, deg)} != (2, {d})")
    scroll = scroll_ideal((1, 1, 1), ring=ideal.ring)
    for g in scroll.gens:
        if not ideal.contains(g):
            raise SurfaceError("surface does not lie on the three-fold scroll")
    return ideal


def type2_surface(a: int, b: int, f, fld: PrimeField | None = None):
    """Projection X_f of S(a,b) to P^{a+3}; returns (ideal, plane ideal).

    f is a binary form of degree b (Polynomial in a ring named s,t, or text).
    The plane {x_0 = ... = x_a = 0} is the extremal plane by construction.
    """
    from .field import DEFAULT_PRIME, PrimeField as PF

    fld = fld or PF(DEFAULT_PRIME)
    if not (3 <= a <= b):
        raise SurfaceError("type II needs 3 <= a <= b")
    param_ring = PolyRing(fld, ["s", "t", "u", "v"])
    s, t, u, v = param_ring.gens()
    if isinstance(f, str):
        f = parse_polynomial(f, PolyRing(fld, ["s", "t"]))
    if f.ring.names != ("s", "t"):
        raise SurfaceError("f must live in a ring with variables s,t")
    if not f.d or not f.is_homogeneous() or f.degree() != b:
        raise SurfaceError(f"f must be homogeneous of degree {b}")
    if all(exps in ((b, 0), (0, b)) for exps, _ in f.terms()):
        raise SurfaceError(
            "f lies in the span of s^b and t^b; the projection center degenerates"
        )
    images = [u * s ** (a - i) * t ** i for i in range(a + 1)]
    fimg = v * f.substitute({0: s, 1: t}, param_ring)
    images += [v * s ** b, fimg, v * t ** b]
    names = [f"x{i}" for i in range(a + 4)]
    ideal = kernel_of_map(images, names)
    d = a + b
    dim, deg = ideal.dim_degree()
    if (dim, deg) != (2, d):
        raise SurfaceError(
            f"degree validation failed ({(dim, deg)} != (2, {d})): "
            "the plane image is likely not birational"
        )
    plane = Ideal(ideal.ring, [ideal.ring.variable(i) for i in range(a + 1)])
    return ideal, plane


def union_with_plane(I: Ideal, L: Ideal) -> Ideal:
    """Vanishing ideal of X ∪ F: the intersection I ∩ L (stays saturated)."""
    ring = I.ring
    if L.ring is not ring:
        raise RingError("plane ideal lives in a different ring")
    r = ring.nvars - 1
    if len(L.gens) != r - 2 or any(
        g.degree() != 1 or not g.is_homogeneous() for g in L.gens
    ):
        raise SurfaceError("expected r-2 independent linear forms")
    rows = []
    for g in L.gens:
        row = [0] * ring.nvars
        for exps, c in g.terms():
            row[exps.index(1)] = c
        rows.append(row)
    _, piv = rref_modp(np.array(rows, dtype=np.int64), ring.field.p)
    if len(piv) != r - 2:
        raise SurfaceError("plane ideal generators are dependent")
    return intersect(I, L)


def _binary_gcd_degree(forms: list[Polynomial]) -> int:
    """Total degree of gcd of nonzero binary forms over F_p."""
    ring = forms[0].ring
    p = ring.field.p
    svals, tvals, cores = [], [], []
    for fpoly in forms:
        terms = fpoly.terms()
        smin = min(e[0] for e, _ in terms)
        tmin = min(e[1] for e, _ in terms)
        svals.append(smin)
        tvals.append(tmin)
        deg = fpoly.degree()
        core_deg = deg - smin - tmin
        coeffs = [0] * (core_deg + 1)
        for (es, et), c in terms:
            coeffs[et - tmin] = c  # coefficient of w^(et-tmin), w = t/s
        cores.append(coeffs)
    g = cores[0]
    for nxt in cores[1:]:
        g = _poly_gcd_modp(g, nxt, p)
        if len(g) == 1:
            break
    return min(svals) + min(tvals) + (len(g) - 1)


def _poly_gcd_modp(a: list[int], b: list[int], p: int) -> list[int]:
    def trim(x):
        while x and x[-1] % p == 0:
            x.pop()
        return x

    a, b = trim(list(a)), trim(list(b))
    while b:
        inv = pow(b[-1], -1, p)
        while len(a) >= len(b):
            f = a[-1] * inv % p
            if f:
                off = len(a) - len(b)
                for i, c in enumerate(b):
                    a[off + i] = (a[off + i] - f * c) % p
            a.pop()
            trim(a)
            if not a:
                break
        a, b = b, a
    if not a:
        return [1]
    return a


def secant_length(I: Ideal, line: Line):
    """length(X ∩ L) via gcd of the restricted generators; None = infinite.

    The restriction ideal in k[s,t] saturates to the principal ideal on the
    gcd, so the scheme length is the gcd degree.
    """
    ring = I.ring
    st = PolyRing(ring.field, ["s@", "t@"])
    restricted = [line.restrict(g, st) for g in I.gens]
    nonzero = [f for f in restricted if f.d]
    if not nonzero:
        return None
    return _binary_gcd_degree(nonzero)


def random_plane_line(spec: SurfaceSpec, rng: SplitMix64, p: int) -> Line:
    """A random line inside the extremal plane {x_0 = ... = x_a = 0}."""
    a = spec.a
    n = spec.r + 1
    while True:
        pt1 = [0] * n
        pt2 = [0] * n
        for i in range(a + 1, n):
            pt1[i] = rng.next() % p
            pt2[i] = rng.next() % p
        try:
            return Line(pt1, pt2, p)
        except SurfaceError:
            continue


def segre_line_section(rng: SplitMix64, p: int) -> Line:
    """Line section P^1 x {q} of the Segre threefold, q in P^2 random."""
    while True:
        q = [rng.next() % p for _ in range(3)]
        if any(q):
            break
    pt1 = [q[0], 0, q[1], 0, q[2], 0]
    pt2 = [0, q[0], 0, q[1], 0, q[2]]
    return Line(pt1, pt2, p)


RETRY_BUDGET = 16


def sample_secant_lines(spec: SurfaceSpec, I: Ideal, n: int, seed: int) -> list[SecantSample]:
    """n random extremal-secant candidates with lengths and Pluecker vectors.

    Type II samples lines in the extremal plane; the smooth P^5 family
    samples line sections of the Segre threefold.  Lines meeting the surface
    in a whole line are resampled within a bounded retry budget.
    """
    if n < 1:
        raise SurfaceError("need at least one sample")
    p = I.ring.field.p
    samples = []
    for k in range(n):
        line = None
        length = None
        for attempt in range(RETRY_BUDGET):
            rng = derived_rng(seed, 303, k, attempt)
            if spec.kind == "type2":
                cand = random_plane_line(spec, rng, p)
            elif spec.kind == "type1":
                cand = segre_line_section(rng, p)
            else:
                raise SurfaceError(f"no secant sampler for kind {spec.kind!r}")
            length = secant_length(I, cand)
            if length is not None:
                line = cand
                break
        if line is None:
            raise SurfaceError(
                f"retry budget exhausted sampling secant lines (seed {seed})"
            )
        samples.append(SecantSample(line=line, length=length, plucker=line.plucker()))
    return samples


@dataclass
class PluckerReport:
    span_dim: int
    quadric_dim: int
    quadric_check: bool


def plucker_span(samples: list[SecantSample], p: int) -> PluckerReport:
    """Projective span of the Pluecker vectors plus a quadric holdout test.

    Quadrics are fitted in coordinates on the span, using the first half of
    the samples, and verified on the second half.
    """
    if len(samples) < 2:
        raise SurfaceError("need at least two samples")
    M = np.array([s.plucker for s in samples], dtype=np.int64)
    R, piv = rref_modp(M, p)
    rank = len(piv)
    basis = R[:rank, :]
    coords = M[:, piv] % p  # coefficients w.r.t. the reduced basis
    nsamp = len(samples)
    half = nsamp // 2
    monos = [(i, j) for i in range(rank) for j in range(i, rank)]

    def quad_row(c):
        return [(int(c[i]) * int(c[j])) % p for (i, j) in monos]

    train = np.array([quad_row(coords[k]) for k in range(half)], dtype=np.int64)
    quad_basis = nullspace_modp(train, p)
    ok = True
    for k in range(half, nsamp):
        row = np.array(quad_row(coords[k]), dtype=np.int64)
        if quad_basis.size and np.any((quad_basis @ row) % p):
            ok = False
            break
    return PluckerReport(span_dim=rank - 1, quadric_dim=quad_basis.shape[0], quadric_check=ok)


def secant_report(spec: SurfaceSpec, I: Ideal, n: int, seed: int) -> dict:
    samples = sample_secant_lines(spec, I, n, seed)
    rep = plucker_span(samples, I.ring.field.p)
    return {
        "n": n,
        "lengths": [s.length for s in samples],
        "span_dim": rep.span_dim,
        "quadric_check": rep.quadric_check,
        "seed": seed,
    }
