"""Built-in models with independently derived expected homology.

Every fixture value recorded here is recomputed by its stated oracle in
``tests/test_models.py`` before the rest of the suite relies on it:

* circle: cellular chain complex of the universal cover of the circle
  (a line), computed on finite segments.
* sphere(n): the cone of right-multiplication by the degree-(n-1) generator
  on the free associative algebra is acyclic except in degree 0.
* torus: Koszul complex of (t-1, s-1) over the two-variable group ring;
  windowed truncations are cellular complexes of solid rectangles.
* projective space: cellular chain complex of the sphere double cover,
  two cells per dimension.
* hopf: H_*(S^3) by direct 2x2 linear algebra; the twisted complex couples
  a rank-2 fiber module to the two-cell base through a degree-1 holonomy.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .dga import LaurentDGA, Rank1LocalSystem, TableDGA
from .dgmodule import DGModule, module_from_dga, twist_by_rank1
from .errors import TruncationTooSmall
from .intlinalg import HomologyGroup
from .twisted import Generator, TwistedComplex

Z = HomologyGroup(1)
TRIVIAL = HomologyGroup(0)


@dataclass
class NamedModel:
    identifier: str
    dga: object
    module: DGModule
    complex: TwistedComplex
    expected_homology: dict       # degree -> HomologyGroup over the certified range
    provenance: str
    local_system: Rank1LocalSystem | None = None

    @property
    def certified_degrees(self):
        return sorted(self.expected_homology)


def circle_model():
    alg = LaurentDGA("Zt", ("t",))
    module = module_from_dga(alg, name="R1")
    gens = (Generator("M", 1, Fraction(1)), Generator("m", 0, Fraction(0)))
    entry = alg.generator("t") - alg.unit_element()
    cx = TwistedComplex("S1", module, gens, {("M", "m"): entry})
    expected = {0: Z, **{d: TRIVIAL for d in range(1, 9)}}
    return NamedModel(
        "circle", alg, module, cx, expected,
        provenance="cellular chain complex of the universal cover (a line), "
                   "verified on finite segments")


def circle_twisted_model():
    """Circle with sign monodromy and coefficients of rank 1 in degree 0."""
    alg = LaurentDGA("Zt", ("t",))
    trivial = DGModule("Z0", alg, {0: ("one",)},
                       generator_actions={"t": {"one": {"one": 1}}})
    system = Rank1LocalSystem(alg, {"t": -1}, name="sign")
    module = twist_by_rank1(trivial, system)
    gens = (Generator("M", 1, Fraction(1)), Generator("m", 0, Fraction(0)))
    entry = alg.generator("t") - alg.unit_element()
    cx = TwistedComplex("S1w", module, gens, {("M", "m"): entry})
    expected = {0: HomologyGroup(0, (2,)), 1: TRIVIAL}
    return NamedModel(
        "circle-twisted", alg, module, cx, expected,
        provenance="Smith form of multiplication by -2 on a rank-1 lattice",
        local_system=system)


def free_algebra(symbol, degree, truncation, name=None):
    """Free associative algebra on one generator, truncated by total degree."""
    basis = {}
    words = {0: "e"}
    k = 1
    while k * degree <= truncation:
        words[k] = symbol if k == 1 else f"{symbol}{k}"
        k += 1
    for power, word in words.items():
        basis.setdefault(power * degree, []).append(word)
    product = {}
    for a, wa in words.items():
        for b, wb in words.items():
            if a and b and (a + b) in words:
                product[wa, wb] = {words[a + b]: 1}
    return TableDGA(name or f"Free[{symbol}:{degree}]", truncation,
                    basis, product, unit="e")


def sphere_model(n, truncation=12):
    """Path-space model over a sphere: acyclic except in degree 0."""
    if n < 2:
        raise ValueError("sphere model needs n >= 2")
    if truncation < 2 * n:
        raise TruncationTooSmall(f"truncation {truncation} < 2n = {2 * n}")
    alg = free_algebra("x", n - 1, truncation)
    module = module_from_dga(alg, name=f"Free(x{n - 1})")
    gens = (Generator("M", n, Fraction(1)), Generator("m", 0, Fraction(0)))
    cx = TwistedComplex(f"S{n}", module, gens,
                        {("M", "m"): alg.element({"x": 1})})
    expected = {0: Z, **{d: TRIVIAL for d in range(1, truncation - 1)}}
    return NamedModel(
        f"sphere{n}", alg, module, cx, expected,
        provenance="cone of right-multiplication by the degree-(n-1) generator "
                   "on the free algebra; the shifted-monomial map is a bijection")


def torus_model():
    alg = LaurentDGA("Zts", ("t", "s"))
    module = module_from_dga(alg, name="R2")
    one = alg.unit_element()
    t1 = alg.generator("t") - one
    s1 = alg.generator("s") - one
    gens = (
        Generator("T", 2, Fraction(2)),
        Generator("a", 1, Fraction(1)),
        Generator("b", 1, Fraction(1)),
        Generator("v", 0, Fraction(0)),
    )
    cocycle = {
        ("a", "v"): t1,
        ("b", "v"): s1,
        ("T", "a"): s1,
        ("T", "b"): -t1,
    }
    cx = TwistedComplex("T2", module, gens, cocycle)
    expected = {0: Z, 1: TRIVIAL, 2: TRIVIAL}
    return NamedModel(
        "torus", alg, module, cx, expected,
        provenance="Koszul complex of (t-1, s-1); windowed truncations are "
                   "cellular complexes of solid rectangles in the plane")


def group_ring_c2(name="ZC2"):
    """Z[g]/(g^2 = 1) as a degree-0 table algebra."""
    return TableDGA(name, 12, {0: ("e", "g")},
                    {("g", "g"): {"e": 1}}, unit="e")


def rp_model(n, ground="Z"):
    """Real projective n-space with group-ring coefficients: H_*(S^n)."""
    alg = group_ring_c2()
    module = module_from_dga(alg, name="ZC2mod")
    gens = tuple(Generator(f"x{k}", k, Fraction(k)) for k in range(n, -1, -1))
    cocycle = {}
    for k in range(1, n + 1):
        sign = 1 if k % 2 == 0 else -1
        cocycle[f"x{k}", f"x{k - 1}"] = alg.element({"e": 1, "g": sign})
    cx = TwistedComplex(f"RP{n}", module, gens, cocycle)
    expected = {d: (Z if d in (0, n) else TRIVIAL) for d in range(n + 1)}
    model = NamedModel(
        f"rp{n}", alg, module, cx, expected,
        provenance="cellular chain complex of the double cover sphere, "
                   "two cells per dimension")
    model.ground = ground
    return model


def hopf_model(truncation=8):
    """Total space of the circle bundle over the two-sphere: H_*(S^3)."""
    alg = free_algebra("x", 1, truncation)
    module = DGModule(
        "HopfFiber", alg, {0: ("one",), 1: ("u",)},
        action={("one", "x"): {"u": 1}, ("u", "x"): {}})
    gens = (Generator("M", 2, Fraction(1)), Generator("m", 0, Fraction(0)))
    cx = TwistedComplex("HOPF", module, gens,
                        {("M", "m"): alg.element({"x": 1})})
    expected = {0: Z, 1: TRIVIAL, 2: TRIVIAL, 3: Z}
    return NamedModel(
        "hopf", alg, module, cx, expected,
        provenance="H_*(S^3) by direct 2x2 linear algebra on the four chains")


BUILTIN_MODELS = {
    "circle": circle_model,
    "circle-twisted": circle_twisted_model,
    "sphere2": lambda: sphere_model(2),
    "sphere3": lambda: sphere_model(3),
    "torus": torus_model,
    "rp2": lambda: rp_model(2),
    "rp3": lambda: rp_model(3),
    "hopf": hopf_model,
}


def builtin_model(identifier):
    try:
        return BUILTIN_MODELS[identifier]()
    except KeyError:
        raise KeyError(f"unknown built-in model {identifier!r}; "
                       f"choose from {sorted(BUILTIN_MODELS)}") from None
