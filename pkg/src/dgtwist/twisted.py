"""Twisted tensor complexes: a DG module tensored with a finite generator set,
with the differential twisted by a Maurer-Cartan cocycle.

The differential on module-element (x) generator chains is

    D(a (x) x) = da (x) x + (-1)^{|a|} sum_y a . m_{x,y} (x) y,

where the cocycle entries m_{x,y} are algebra elements of degree
|x| - |y| - 1 satisfying the Maurer-Cartan equation

    d m_{x,y} - sum_z (-1)^{|x|-|z|} m_{x,z} m_{z,y} = 0,

which is exactly the condition D*D = 0.

Generators carry an optional exact rational action value; the subcomplexes
spanned by generators of action below a level are used for filtration
computations and spectral numbers.  Over a Laurent group ring with a free
module the chain groups have infinite rank over Z, so matrices are assembled
on exponent windows: a finite downward-closed sub-collection of monomials
that forms a genuine subcomplex.  Windowed answers are accepted only when
they agree across two consecutive window radii.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction

from .dga import LaurentDGA
from .dgmodule import DGModule
from .errors import (
    DifferentialNotSquareZero,
    MixedAlgebra,
    NotACycle,
    NotActionMonotone,
    WindowUnstable,
)
from .intlinalg import (
    CompositionNonzero,
    HomologyGroup,
    IntMatrix,
    hermite_column_basis,
    homology_presentation,
    lattice_member,
    rational_rank,
    rational_solvable,
)
from .validation import ValidationReport

DEFAULT_WINDOW_RADIUS = 4


def default_window_radius():
    value = os.environ.get("DGC_WINDOW")
    return int(value) if value else DEFAULT_WINDOW_RADIUS


@dataclass(frozen=True)
class Generator:
    """A complex generator: graded, optionally action-weighted and labelled."""

    name: str
    degree: int
    action: Fraction | None = None
    class_label: str | None = None


class Chain:
    """An element of module (x) generators: terms keyed (module word, generator name)."""

    __slots__ = ("complex", "terms")

    def __init__(self, complex_, terms=None):
        self.complex = complex_
        clean = {}
        if terms:
            for k, c in terms.items():
                if c:
                    clean[k] = clean.get(k, 0) + c
                    if not clean[k]:
                        del clean[k]
        self.terms = clean

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return (isinstance(other, Chain) and self.complex is other.complex
                and self.terms == other.terms)

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return Chain(self.complex, out)

    def __sub__(self, other):
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) - c
        return Chain(self.complex, out)

    def __neg__(self):
        return Chain(self.complex, {k: -c for k, c in self.terms.items()})

    def scale(self, c):
        return Chain(self.complex, {k: c * v for k, v in self.terms.items()})

    def _check(self, other):
        if self.complex is not other.complex:
            raise MixedAlgebra("chains belong to different complexes")

    def degree(self):
        degs = {self.complex.key_degree(k) for k in self.terms}
        if not degs:
            return None
        if len(degs) > 1:
            raise ValueError(f"chain is not homogeneous: degrees {sorted(degs)}")
        return degs.pop()

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for (mw, g), c in sorted(self.terms.items(), key=lambda it: repr(it[0])):
            bits.append(f"{c}*{self.complex.module.word_name(mw)}@{g}")
        return " + ".join(bits).replace("+ -", "- ")


class TwistedComplex:
    """A module, a finite ordered generator set, and a twisting cocycle."""

    def __init__(self, name, module, generators, cocycle):
        """``cocycle``: dict (source name, target name) -> AlgebraElement."""
        self.name = name
        self.module = module
        self.generators = tuple(generators)
        self.gen_index = {}
        for g in self.generators:
            if g.name in self.gen_index:
                raise ValueError(f"duplicate generator name {g.name!r}")
            self.gen_index[g.name] = g
        self.cocycle = {}
        self._by_source = {}
        for (x, y), el in cocycle.items():
            if x not in self.gen_index or y not in self.gen_index:
                raise KeyError(f"cocycle entry ({x}, {y}) references unknown generators")
            if el:
                self.cocycle[x, y] = el
                self._by_source.setdefault(x, []).append((y, el))

    # -- basic accessors ----------------------------------------------------
    @property
    def algebra(self):
        return self.module.algebra

    def entry(self, x, y):
        return self.cocycle.get((x, y), self.algebra.zero())

    def generator(self, name):
        return self.gen_index[name]

    def key_degree(self, key):
        mw, g = key
        return self.module.word_degree(mw) + self.gen_index[g].degree

    def chain(self, terms):
        return Chain(self, terms)

    def zero_chain(self):
        return Chain(self, {})

    def tensor(self, module_element, gen_name):
        g = self.gen_index[gen_name]  # raises on unknown generator
        return Chain(self, {(w, g.name): c for w, c in module_element.terms.items()})

    def is_windowed(self):
        return not self.module.is_finite_rank()

    def degree_span(self):
        gd = [g.degree for g in self.generators]
        lo = (min(self.module.basis) if self.module.basis else 0) + (min(gd) if gd else 0)
        hi = (max(self.module.basis) if self.module.basis else 0) + (max(gd) if gd else 0)
        return lo, hi

    # -- differential ---------------------------------------------------------
    def differential_chain(self, chain):
        if chain.complex is not self:
            raise MixedAlgebra("chain belongs to a different complex")
        out = {}
        module = self.module
        for (mw, gname), c in chain.terms.items():
            el = module.element({mw: 1})
            for w2, c2 in module.differential(el).terms.items():
                key = (w2, gname)
                out[key] = out.get(key, 0) + c * c2
            sign = -1 if module.word_degree(mw) % 2 else 1
            for y, entry in self._by_source.get(gname, ()):
                acted = module.act(el, entry)
                for w2, c2 in acted.terms.items():
                    key = (w2, y)
                    out[key] = out.get(key, 0) + c * c2 * sign
        return Chain(self, out)

    # -- bases --------------------------------------------------------------
    def basis(self, degree):
        """Ordered chain basis in a total degree (finite-rank modules only)."""
        out = []
        for g in self.generators:
            for mw in self.module.words_of_degree(degree - g.degree):
                out.append((mw, g.name))
        return out

    def window_bases(self, lo, hi, radius):
        """Chain bases per degree for a Laurent-free module.

        Every degree in [lo, hi] is seeded with the exponent box
        [-radius, radius]^k and the collection is closed downward under the
        differential, so the result spans a genuine subcomplex.
        """
        alg = self.algebra
        k = len(alg.generators)
        box = [()]
        for _ in range(k):
            box = [e + (i,) for e in box for i in range(-radius, radius + 1)]
        sets = {d: {} for d in range(lo, hi + 1)}  # degree -> {(base, gen): set(exp)}

        def bucket(d, base, gen):
            if d not in sets:
                sets[d] = {}
            return sets[d].setdefault((base, gen), set())

        for d in range(lo, hi + 1):
            for g in self.generators:
                md = d - g.degree
                for base in self.module.basis.get(md, ()):
                    bucket(d, base, g.name).update(box)

        for d in range(hi, lo - 1, -1):
            for (base, gen), exps in list(sets.get(d, {}).items()):
                dbase = self.module.diff.get(base, {})
                for (b2, e2) in dbase:
                    tgt = bucket(d - 1, b2, gen)
                    tgt.update(tuple(a + b for a, b in zip(e, e2)) for e in exps)
                for (x, y), entry in self.cocycle.items():
                    if x != gen:
                        continue
                    for mono in entry.terms:
                        tgt = bucket(d - 1, base, y)
                        tgt.update(tuple(a + b for a, b in zip(e, mono)) for e in exps)

        bases = {}
        for d, table in sets.items():
            row = []
            for g in self.generators:
                for base in [w for deg in sorted(self.module.basis)
                             for w in self.module.basis[deg]]:
                    exps = table.get((base, g.name))
                    if exps:
                        row.extend(((base, e), g.name) for e in sorted(exps))
            bases[d] = row
        return bases

    def bases_for(self, lo, hi, radius=None):
        if self.is_windowed():
            radius = radius if radius is not None else default_window_radius()
            return self.window_bases(lo, hi, radius)
        return {d: self.basis(d) for d in range(lo, hi + 1)}

    def boundary_matrix(self, degree, bases):
        """Matrix of D from ``degree`` to ``degree - 1`` in the given bases."""
        source = bases.get(degree, [])
        target = bases.get(degree - 1, [])
        tidx = {k: i for i, k in enumerate(target)}
        mat = IntMatrix(len(target), len(source))
        for j, (mw, g) in enumerate(source):
            image = self.differential_chain(Chain(self, {(mw, g): 1}))
            for key, c in image.terms.items():
                if key not in tidx:
                    raise WindowUnstable(
                        f"differential leaves the window at degree {degree}: {key}")
                mat.data[tidx[key]][j] = c
        return mat

    # -- filtration -----------------------------------------------------------
    def check_action_monotone(self):
        for (x, y), el in self.cocycle.items():
            if not el:
                continue
            gx, gy = self.gen_index[x], self.gen_index[y]
            if gx.action is None or gy.action is None:
                raise NotActionMonotone(x, y)
            if not gy.action < gx.action:
                raise NotActionMonotone(x, y)

    def restricted(self, names, name=None):
        """Subcomplex spanned by the given generator names."""
        keep = set(names)
        gens = [g for g in self.generators if g.name in keep]
        cocycle = {(x, y): el for (x, y), el in self.cocycle.items()
                   if x in keep and y in keep}
        return TwistedComplex(name or f"{self.name}|{len(gens)}", self.module, gens, cocycle)


def validate_cocycle(cx):
    """Degree constraints plus the exact Maurer-Cartan residual per pair."""
    report = ValidationReport()
    for (x, y), el in cx.cocycle.items():
        gx, gy = cx.gen_index[x], cx.gen_index[y]
        k = gx.degree - gy.degree - 1
        if not el:
            continue
        if gx.class_label != gy.class_label:
            report.add("class-label", (x, y),
                       "cocycle entries must connect generators in the same class")
        if k < 0:
            report.add("negative-degree", (x, y),
                       f"entry would need degree {k} < 0 and must vanish")
        elif not el.is_homogeneous(k):
            report.add("entry-degree", (x, y), f"entry is not homogeneous of degree {k}")
    for x in cx.gen_index:
        for y in cx.gen_index:
            r = maurer_cartan_residual(cx, x, y)
            if r:
                report.add("maurer-cartan", (x, y), f"residual {r!r}")
    return report


def maurer_cartan_residual(cx, x, y):
    """d m_{x,y} - sum_z (-1)^{|x|-|z|} m_{x,z} m_{z,y}, exactly."""
    alg = cx.algebra
    gx = cx.gen_index[x]
    r = alg.differential(cx.entry(x, y))
    for z, gz in cx.gen_index.items():
        a = cx.cocycle.get((x, z))
        b = cx.cocycle.get((z, y))
        if a and b:
            sign = -1 if (gx.degree - gz.degree) % 2 else 1
            r = r - (a * b).scale(sign)
    return r


def assemble_differential(cx, degrees, window_radius=None):
    """Matrices of D per total degree in ``degrees`` (D: C_d -> C_{d-1})."""
    degrees = list(degrees)
    lo, hi = min(degrees), max(degrees)
    bases = cx.bases_for(lo - 1, hi, window_radius)
    return [cx.boundary_matrix(d, bases) for d in degrees]


def _homology_once(cx, degrees, ring, radius):
    lo, hi = min(degrees), max(degrees)
    bases = cx.bases_for(lo - 1, hi + 1, radius)
    mats = {d: cx.boundary_matrix(d, bases) for d in range(lo, hi + 2)}
    out = []
    for d in degrees:
        d_out, d_in = mats[d], mats[d + 1]
        if ring == "Q":
            free = d_out.cols - rational_rank(d_out) - rational_rank(d_in)
            out.append(HomologyGroup(free))
            continue
        try:
            out.append(homology_presentation(d_in, d_out).group)
        except CompositionNonzero as err:
            witness = bases[d][err.col] if bases.get(d) else None
            raise DifferentialNotSquareZero(d, witness) from err
    return out


def homology(cx, degrees, ring="Z", window_radius=None):
    """Homology per total degree; windowed answers must stabilize."""
    degrees = list(degrees)
    if not cx.is_windowed():
        return _homology_once(cx, degrees, ring, None)
    radius = window_radius if window_radius is not None else default_window_radius()
    first = _homology_once(cx, degrees, ring, radius)
    second = _homology_once(cx, degrees, ring, radius + 1)
    if first == second:
        return first
    third = _homology_once(cx, degrees, ring, radius + 2)
    if second == third:
        return second
    raise WindowUnstable(
        f"homology of {cx.name} did not stabilize at window radii "
        f"{radius}..{radius + 2}")


class ComplexHomology:
    """Homology presentations of a complex over a shared basis window.

    Exposes, per degree: the chain basis, the quotient presentation of
    ker/im, canonical generator lifts as chains, and coordinate reduction of
    cycles.  Used for induced maps, spectral pages and shriek computations.
    """

    def __init__(self, cx, degrees, window_radius=None):
        self.complex = cx
        self.degrees = sorted(degrees)
        lo, hi = self.degrees[0], self.degrees[-1]
        self.bases = cx.bases_for(lo - 1, hi + 1, window_radius)
        mats = {d: cx.boundary_matrix(d, self.bases) for d in range(lo, hi + 2)}
        self.presentations = {}
        for d in self.degrees:
            try:
                self.presentations[d] = homology_presentation(mats[d + 1], mats[d])
            except CompositionNonzero as err:
                witness = self.bases[d][err.col] if self.bases.get(d) else None
                raise DifferentialNotSquareZero(d, witness) from err

    def group(self, d):
        return self.presentations[d].group

    def chain_vector(self, chain, degree):
        basis = self.bases.get(degree, [])
        idx = {k: i for i, k in enumerate(basis)}
        vec = [0] * len(basis)
        for key, c in chain.terms.items():
            if key not in idx:
                raise WindowUnstable(
                    f"chain support {key} falls outside the degree-{degree} basis")
            vec[idx[key]] = c
        return vec

    def class_vector(self, chain, degree=None):
        """Canonical coordinates of the homology class of a cycle."""
        degree = degree if degree is not None else chain.degree()
        return self.presentations[degree].reduce(self.chain_vector(chain, degree))

    def generator_chain(self, degree, index):
        vec = self.presentations[degree].lift(index)
        basis = self.bases[degree]
        return Chain(self.complex,
                     {basis[i]: v for i, v in enumerate(vec) if v})


def filtered_subcomplex(cx, level):
    """Subcomplex on generators of action strictly below ``level``.

    ``level=None`` is the +infinity sentinel and returns the complex itself.
    """
    cx.check_action_monotone()
    if level is None:
        return cx
    names = []
    for g in cx.generators:
        if g.action is None:
            raise NotActionMonotone(g.name, g.name)
        if g.action < level:
            names.append(g.name)
    return cx.restricted(names, name=f"{cx.name}<{level}")


def is_cycle(cx, chain):
    return not cx.differential_chain(chain)


def _boundary_test(cx, chain, names, ring, radius):
    """Is ``chain`` a boundary within the subcomplex spanned by ``names``?"""
    keep = set(names)
    if any(g not in keep for (_, g) in chain.terms):
        return False
    sub = cx.restricted(names)
    target = chain.degree()
    if target is None:
        return True
    bases = sub.bases_for(target, target + 1, radius)
    basis_d = bases.get(target, [])
    tidx = {k: i for i, k in enumerate(basis_d)}
    vec = [0] * len(basis_d)
    for key, c in chain.terms.items():
        if key not in tidx:
            return False  # support outside the window: grow the radius
        vec[tidx[key]] = c
    mat = sub.boundary_matrix(target + 1, bases)
    if ring == "Q":
        return rational_solvable(mat, vec)
    basis_cols = hermite_column_basis(mat)
    return lattice_member(basis_cols, vec)


def spectral_number(cx, chain, level, ring="Z", window_radius=None):
    """Infimal filtration level at which the class of ``chain`` dies.

    ``level`` is the filtration level at which the cycle is given; ``None``
    is the +infinity sentinel (the full complex).  Returns an exact rational,
    or None for +infinity (the class survives in the full complex).  The
    result is always either ``level`` or the action value of some generator.
    """
    cx.check_action_monotone()
    if chain.complex is not cx:
        raise MixedAlgebra("chain belongs to a different complex")
    start = filtered_subcomplex(cx, level)
    inside = {g.name for g in start.generators}
    if any(g not in inside for (_, g) in chain.terms):
        raise NotACycle(f"chain is not supported in the level-{level} subcomplex")
    if cx.differential_chain(chain):
        raise NotACycle("chain is not a cycle")
    if not chain:
        return level

    if not cx.is_windowed():
        return _spectral_number_once(cx, chain, level, ring, None)
    radius = window_radius if window_radius is not None else default_window_radius()
    first = _spectral_number_once(cx, chain, level, ring, radius)
    second = _spectral_number_once(cx, chain, level, ring, radius + 1)
    if first == second:
        return first
    third = _spectral_number_once(cx, chain, level, ring, radius + 2)
    if second == third:
        return second
    raise WindowUnstable("spectral number did not stabilize across window radii")


def _spectral_number_once(cx, chain, level, ring, radius):
    def vanish(bound):
        names = [g.name for g in cx.generators
                 if g.action is not None and g.action <= bound]
        return _boundary_test(cx, chain, names, ring, radius)

    candidates = [] if level is None else [level]
    candidates += sorted({g.action for g in cx.generators
                          if g.action is not None
                          and (level is None or g.action >= level)})
    for c in candidates:
        if vanish(c):
            return c
    return None
