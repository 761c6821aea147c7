"""One-stop computation bundles for the two surface families.

A bundle constructs the ideal, its minimal resolution and Betti table, the
union with the extremal plane (projected family), the cohomology table and
deficiency modules, secant samples and the derived invariants; the
verification harness consumes it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

from .cohomology import (
    CohomologyTable,
    deficiency_module,
    sectional_genus,
    sectional_regularity,
    sheaf_cohomology_table,
)
from .field import DEFAULT_PRIME, PrimeField
from .groebner import Ideal, ideal_equal
from .idealops import irrelevant_ideal, saturate
from .resolution import FreeResolution, euler_check, minimal_resolution
from .ring import PolyRing, Polynomial
from .surfaces import (
    PluckerReport,
    SurfaceSpec,
    plucker_span,
    sample_secant_lines,
    secant_length,
    type1_surface,
    type2_surface,
    union_with_plane,
)


@dataclass
class SurfaceBundle:
    name: str
    spec: SurfaceSpec
    ideal: Ideal
    resolution: FreeResolution
    betti: object
    cohomology: CohomologyTable
    k1: object
    k2: object
    k3: object
    plane: Ideal | None = None
    y_ideal: Ideal | None = None
    res_y: FreeResolution | None = None
    betti_y: object | None = None
    tau: tuple | None = None
    sreg: int | None = None
    sreg_values: list | None = None
    sigma: int | None = None
    secant: dict | None = None
    plucker: PluckerReport | None = None
    quadric_count: int | None = None
    euler_ok: bool | None = None
    ideal_decomposition_ok: bool | None = None
    k1_socle: dict | None = None

    @property
    def d(self) -> int:
        return self.spec.d

    @property
    def r(self) -> int:
        return self.spec.r

    def invariants_json(self) -> dict:
        return {
            "name": self.name,
            "d": self.d,
            "r": self.r,
            "dim_degree": list(self.ideal.dim_degree()),
            "reg": self.betti.reg_subscheme,
            "sreg": self.sreg,
            "depth": self.betti.depth,
            "depth_union": self.betti_y.depth if self.betti_y else None,
            "tau": list(self.tau) if self.tau else None,
            "e": self.cohomology.e,
            "N": "-inf" if self.cohomology.N is None else self.cohomology.N,
            "sectional_genus": self.sigma,
            "pd": self.betti.pd,
        }


def _decomposition_holds(I: Ideal, IY: Ideal, top_degree: int) -> bool:
    """I = (I ∩ L, f) for some f of the top degree outside the intersection."""
    gby = IY.groebner()
    f = None
    for g in I.gens:
        if g.degree() == top_degree and gby.reduce(g).d:
            f = g
            break
    if f is None:
        return False
    return ideal_equal(I, Ideal(I.ring, list(IY.gens) + [f]))


def build_type1_bundle(d: int, seed: int = 0, secant_n: int = 40,
                       fld: PrimeField | None = None,
                       with_sections: bool = True) -> SurfaceBundle:
    fld = fld or PrimeField(DEFAULT_PRIME)
    spec = SurfaceSpec(kind="type1", r=5, d=d, seed=seed)
    ideal = type1_surface(d, fld)
    res = minimal_resolution(ideal)
    betti = res.betti_table()
    tab = sheaf_cohomology_table(ideal, res=res)
    k1, k2, k3 = (deficiency_module(ideal, i, res) for i in (1, 2, 3))
    samples = sample_secant_lines(spec, ideal, secant_n, seed)
    rep = plucker_span(samples, fld.p)
    secant = {
        "n": secant_n,
        "lengths": [s.length for s in samples],
        "span_dim": rep.span_dim,
        "quadric_check": rep.quadric_check,
        "seed": seed,
    }
    sreg = sreg_values = sigma = None
    if with_sections:
        sreg, sreg_values = sectional_regularity(ideal, 3, seed)
        sigma = sectional_genus(ideal, seed)
    return SurfaceBundle(
        name=f"smooth-d{d}",
        spec=spec,
        ideal=ideal,
        resolution=res,
        betti=betti,
        cohomology=tab,
        k1=k1,
        k2=k2,
        k3=k3,
        sreg=sreg,
        sreg_values=sreg_values,
        sigma=sigma,
        secant=secant,
        plucker=rep,
        quadric_count=comb(7, 2) - tab.a_hilbert.hf(2),
        euler_ok=euler_check(res, ideal.hilbert_series()),
    )


def build_type2_bundle(a: int, b: int, f, name: str | None = None,
                       seed: int = 0, secant_n: int = 20,
                       fld: PrimeField | None = None,
                       with_sections: bool = True) -> SurfaceBundle:
    fld = fld or PrimeField(DEFAULT_PRIME)
    ideal, plane = type2_surface(a, b, f, fld)
    d, r = a + b, a + 3
    spec = SurfaceSpec(kind="type2", r=r, d=d, a=a, b=b,
                       f_text=f if isinstance(f, str) else str(f), seed=seed)
    res = minimal_resolution(ideal)
    betti = res.betti_table()
    y_ideal = union_with_plane(ideal, plane)
    res_y = minimal_resolution(y_ideal)
    betti_y = res_y.betti_table()
    tab = sheaf_cohomology_table(ideal, res=res)
    k1, k2, k3 = (deficiency_module(ideal, i, res) for i in (1, 2, 3))
    reg = betti.reg_subscheme
    k1_socle = k1.socle_dims(-(reg + 2), 0) if not k1.is_zero() else {}
    samples = sample_secant_lines(spec, ideal, secant_n, seed)
    rep = plucker_span(samples, fld.p)
    secant = {
        "n": secant_n,
        "lengths": [s.length for s in samples],
        "span_dim": rep.span_dim,
        "quadric_check": rep.quadric_check,
        "seed": seed,
    }
    sreg = sreg_values = sigma = None
    if with_sections:
        sreg, sreg_values = sectional_regularity(ideal, 3, seed)
        sigma = sectional_genus(ideal, seed)
    nvars = r + 1
    return SurfaceBundle(
        name=name or f"proj-a{a}b{b}",
        spec=spec,
        ideal=ideal,
        resolution=res,
        betti=betti,
        cohomology=tab,
        k1=k1,
        k2=k2,
        k3=k3,
        plane=plane,
        y_ideal=y_ideal,
        res_y=res_y,
        betti_y=betti_y,
        tau=(betti.depth, betti_y.depth),
        sreg=sreg,
        sreg_values=sreg_values,
        sigma=sigma,
        secant=secant,
        plucker=rep,
        quadric_count=comb(nvars + 1, 2) - tab.a_hilbert.hf(2),
        euler_ok=euler_check(res, ideal.hilbert_series()),
        ideal_decomposition_ok=_decomposition_holds(ideal, y_ideal, d - r + 3),
        k1_socle=k1_socle,
    )


# the worked examples: smooth family at d = 8, 9, 10 and five projections
PROJECTION_EXAMPLES = {
    "proj-a3b5": (3, 5, "s^4t+s^3t^2+s^2t^3+st^4"),
    "proj-a3b8-f1": (3, 8, "s^7t+s^6t^2+s^5t^3+s^4t^4+s^3t^5+s^2t^6+st^7"),
    "proj-a3b8-f2": (3, 8, "s^7t+s^6t^2+s^5t^3+s^4t^4+s^3t^5+s^2t^6"),
    "proj-a3b8-f3": (3, 8, "s^7t+s^6t^2+s^5t^3+s^4t^4"),
    "proj-a3b9-f1": (3, 9, "s^8t+s^7t^2+s^6t^3+s^5t^4+s^4t^5+s^3t^6+s^2t^7+st^8"),
    "proj-a3b9-f2": (3, 9, "s^8t+s^7t^2+s^6t^3+s^5t^4+s^4t^5+s^3t^6+s^2t^7"),
}

DEMO_EXAMPLES = [
    "smooth-d8",
    "smooth-d9",
    "smooth-d10",
    "proj-a3b5",
    "proj-a3b8-f1",
    "proj-a3b8-f2",
    "proj-a3b8-f3",
    "proj-a3b9-f1",
    "proj-a3b9-f2",
]

EXPECTED_TAU = {
    "proj-a3b5": (2, 3),
    "proj-a3b8-f1": (2, 2),
    "proj-a3b8-f2": (1, 1),
    "proj-a3b8-f3": (2, 3),
    "proj-a3b9-f1": (2, 2),
    "proj-a3b9-f2": (1, 1),
}


def build_example(name: str, seed: int = 0, fld: PrimeField | None = None,
                  with_sections: bool = True) -> SurfaceBundle:
    if name.startswith("smooth-d"):
        d = int(name[len("smooth-d"):])
        return build_type1_bundle(d, seed=seed, fld=fld, with_sections=with_sections)
    if name in PROJECTION_EXAMPLES:
        a, b, f = PROJECTION_EXAMPLES[name]
        return build_type2_bundle(a, b, f, name=name, seed=seed, fld=fld,
                                  with_sections=with_sections)
    raise ValueError(f"unknown example {name!r}")
