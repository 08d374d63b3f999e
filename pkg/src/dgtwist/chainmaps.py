"""Chain maps between twisted complexes, and homotopies between those maps.

A continuation cocycle is a system of algebra elements nu_{x,y} of degree
|x| - |y| between the generators of a source and a target complex, subject to

    d nu_{x,y} = sum_{z+} m+_{x,z+} nu_{z+,y}
               + sum_{z-} (-1)^{|x|-|z-|-1} nu_{x,z-} m-_{z-,y},

which says exactly that the induced operator

    Psi(a (x) x) = sum_y a . nu_{x,y} (x) y

is a chain map.  A homotopy cocycle h_{x,y} of degree |x| - |y| + 1 between
two such systems nu^0, nu^1 satisfies

    d h_{x,y} = nu^1_{x,y} - nu^0_{x,y}
              + sum_{z+} (-1)^{|x|-|z+|} m+_{x,z+} h_{z+,y}
              + sum_{z-} (-1)^{|x|-|z-|} h_{x,z-} m-_{z-,y},

and the induced operator H(a (x) x) = (-1)^{|a|} sum a . h_{x,y} (x) y then
realizes Psi^1 - Psi^0 = D- H + H D+.

Composition multiplies entry systems through the middle complex, identity
systems place the unit on the diagonal, and monotone towers chain several
complexes through filtration-preserving maps.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    ActionsMissing,
    ChainMapViolation,
    EndpointMismatch,
    MixedAlgebra,
)
from .intlinalg import IntMatrix
from .twisted import Chain, ComplexHomology, TwistedComplex
from .validation import ValidationReport


class ContinuationCocycle:
    """Degree-0 system of algebra elements inducing a chain map."""

    def __init__(self, name, source, target, entries):
        if source.algebra is not target.algebra:
            raise MixedAlgebra("source and target complexes share no DGA")
        self.name = name
        self.source = source
        self.target = target
        self.entries = {}
        for (x, y), el in entries.items():
            if x not in source.gen_index or y not in target.gen_index:
                raise KeyError(f"entry ({x}, {y}) references unknown generators")
            if el:
                self.entries[x, y] = el

    def entry(self, x, y):
        return self.entries.get((x, y), self.source.algebra.zero())

    def __repr__(self):
        return f"ContinuationCocycle({self.name}: {self.source.name} -> {self.target.name})"


class HomotopyCocycle:
    """Degree +1 system connecting two continuation cocycles."""

    def __init__(self, name, nu0, nu1, entries):
        if nu0.source is not nu1.source or nu0.target is not nu1.target:
            raise EndpointMismatch("homotopy endpoints must share source and target")
        self.name = name
        self.nu0 = nu0
        self.nu1 = nu1
        self.source = nu0.source
        self.target = nu0.target
        self.entries = {}
        for (x, y), el in entries.items():
            if x not in self.source.gen_index or y not in self.target.gen_index:
                raise KeyError(f"entry ({x}, {y}) references unknown generators")
            if el:
                self.entries[x, y] = el

    def entry(self, x, y):
        return self.source.algebra.zero()if (x, y) not in self.entries else self.entries[x, y]


def identity_cocycle(cx):
    """The unit on the diagonal: induces the identity chain map."""
    unit = cx.algebra.unit_element()
    return ContinuationCocycle(f"id[{cx.name}]", cx, cx,
                               {(g.name, g.name): unit for g in cx.generators})


def continuation_residual(nu, x, y):
    """Defect of the chain-map equation at one generator pair, exactly."""
    alg = nu.source.algebra
    gx = nu.source.gen_index[x]
    r = alg.differential(nu.entry(x, y))
    for z, gz in nu.source.gen_index.items():
        m = nu.source.cocycle.get((x, z))
        v = nu.entries.get((z, y))
        if m and v:
            r = r - m * v
    for z, gz in nu.target.gen_index.items():
        v = nu.entries.get((x, z))
        m = nu.target.cocycle.get((z, y))
        if v and m:
            sign = -1 if (gx.degree - gz.degree - 1) % 2 else 1
            r = r - (v * m).scale(sign)
    return r


def validate_continuation(nu):
    report = ValidationReport()
    for (x, y), el in nu.entries.items():
        k = nu.source.gen_index[x].degree - nu.target.gen_index[y].degree
        if not el.is_homogeneous(k):
            report.add("entry-degree", (x, y),
                       f"entry is not homogeneous of degree {k}")
    for x in nu.source.gen_index:
        for y in nu.target.gen_index:
            r = continuation_residual(nu, x, y)
            if r:
                report.add("continuation", (x, y), f"residual {r!r}")
    return report


def homotopy_residual(h, x, y):
    alg = h.source.algebra
    gx = h.source.gen_index[x]
    r = alg.differential(h.entry(x, y)) - h.nu1.entry(x, y) + h.nu0.entry(x, y)
    for z, gz in h.source.gen_index.items():
        m = h.source.cocycle.get((x, z))
        v = h.entries.get((z, y))
        if m and v:
            sign = -1 if (gx.degree - gz.degree) % 2 else 1
            r = r - (m * v).scale(sign)
    for z, gz in h.target.gen_index.items():
        v = h.entries.get((x, z))
        m = h.target.cocycle.get((z, y))
        if v and m:
            sign = -1 if (gx.degree - gz.degree) % 2 else 1
            r = r - (v * m).scale(sign)
    return r


def validate_homotopy(h, window=None, window_radius=None):
    """Exact residual per pair; on success, the operator identity
    Psi1 - Psi0 = D- H + H D+ is additionally asserted on a degree window."""
    report = ValidationReport()
    for (x, y), el in h.entries.items():
        k = h.source.gen_index[x].degree - h.target.gen_index[y].degree + 1
        if not el.is_homogeneous(k):
            report.add("entry-degree", (x, y),
                       f"entry is not homogeneous of degree {k}")
    for x in h.source.gen_index:
        for y in h.target.gen_index:
            r = homotopy_residual(h, x, y)
            if r:
                report.add("homotopy", (x, y), f"residual {r!r}")
    if not report.ok:
        return report
    lo, hi = h.source.degree_span() if window is None else window
    bases = h.source.bases_for(lo, hi, window_radius)
    for d in range(lo, hi + 1):
        for key in bases.get(d, []):
            c = Chain(h.source, {key: 1})
            lhs = (apply_chain_map(h.nu1, c, check=False)
                   - apply_chain_map(h.nu0, c, check=False))
            rhs = (h.target.differential_chain(apply_homotopy(h, c))
                   + apply_homotopy(h, h.source.differential_chain(c)))
            if lhs != rhs:
                report.add("homotopy-operator", key,
                           f"Psi1-Psi0 differs from D-H + HD+ by {(lhs - rhs)!r}")
    return report


def apply_chain_map(nu, chain, check=True):
    """Psi(a (x) x) = sum a . nu_{x,y} (x) y, with a post-hoc chain-map check.

    The check compares D- Psi and Psi D+ on the given chain; a failure means
    the data left the representable window and raises ChainMapViolation.
    """
    if chain.complex is not nu.source:
        raise MixedAlgebra("chain does not live in the source complex")
    out = {}
    module = nu.source.module
    for (mw, x), c in chain.terms.items():
        el = module.element({mw: 1})
        for (xx, y), entry in nu.entries.items():
            if xx != x:
                continue
            acted = module.act(el, entry)
            for w2, c2 in acted.terms.items():
                key = (w2, y)
                out[key] = out.get(key, 0) + c * c2
    result = Chain(nu.target, out)
    if check:
        lhs = nu.target.differential_chain(result)
        rhs = apply_chain_map(nu, nu.source.differential_chain(chain), check=False)
        if lhs != rhs:
            raise ChainMapViolation((lhs - rhs).terms)
    return result


def apply_homotopy(h, chain):
    """H(a (x) x) = (-1)^{|a|} sum a . h_{x,y} (x) y."""
    if chain.complex is not h.source:
        raise MixedAlgebra("chain does not live in the source complex")
    out = {}
    module = h.source.module
    for (mw, x), c in chain.terms.items():
        el = module.element({mw: 1})
        sign = -1 if module.word_degree(mw) % 2 else 1
        for (xx, y), entry in h.entries.items():
            if xx != x:
                continue
            acted = module.act(el, entry)
            for w2, c2 in acted.terms.items():
                key = (w2, y)
                out[key] = out.get(key, 0) + c * c2 * sign
    return Chain(h.target, out)


def compose(nu12, nu23):
    """Entrywise product through the middle complex.

    ``nu12`` maps complex 1 to complex 2 and ``nu23`` maps complex 2 to
    complex 3; the result maps 1 to 3 and induces apply(nu23) o apply(nu12).
    """
    if nu12.target is not nu23.source:
        raise EndpointMismatch(
            f"target of {nu12.name} is not the source of {nu23.name}")
    entries = {}
    for (x, z), a in nu12.entries.items():
        for (zz, y), b in nu23.entries.items():
            if zz != z:
                continue
            prod = a * b
            if prod:
                key = (x, y)
                entries[key] = entries[key] + prod if key in entries else prod
    return ContinuationCocycle(f"{nu23.name}*{nu12.name}",
                               nu12.source, nu23.target, entries)


def filtration_shift(nu):
    """Smallest E with action(y) <= action(x) + E over nonzero entries.

    Zero or negative for filtration-preserving data; 0 for an empty system.
    """
    shift = None
    for (x, y) in nu.entries:
        ax = nu.source.gen_index[x].action
        ay = nu.target.gen_index[y].action
        if ax is None or ay is None:
            raise ActionsMissing(f"generators {x}, {y} carry no action values")
        diff = ay - ax
        shift = diff if shift is None else max(shift, diff)
    return shift if shift is not None else 0


@dataclass
class InducedMap:
    """A homology-level map in canonical presentation coordinates.

    ``matrix`` sends source presentation generators to coordinate vectors in
    the target presentation; columns are well-defined modulo the target
    moduli (0 = a free generator, d >= 2 = torsion of order d).
    """

    degree: int
    matrix: IntMatrix
    source_moduli: tuple
    target_moduli: tuple

    def equals(self, other):
        if (self.degree != other.degree or self.source_moduli != other.source_moduli
                or self.target_moduli != other.target_moduli):
            return False
        diff = self.matrix - other.matrix
        for i, m in enumerate(self.target_moduli):
            for j in range(diff.cols):
                v = diff.data[i][j]
                if (v % m if m else v) != 0:
                    return False
        return True

    def is_identity(self):
        if self.source_moduli != self.target_moduli:
            return False
        ident = InducedMap(self.degree, IntMatrix.identity(len(self.target_moduli)),
                           self.source_moduli, self.target_moduli)
        return self.equals(ident)

    def is_zero(self):
        zero = InducedMap(self.degree,
                          IntMatrix(len(self.target_moduli), len(self.source_moduli)),
                          self.source_moduli, self.target_moduli)
        return self.equals(zero)

    def compose_with(self, earlier):
        """self o earlier, reduced modulo the target moduli."""
        prod = self.matrix * earlier.matrix
        for i, m in enumerate(self.target_moduli):
            if m:
                prod.data[i] = [v % m for v in prod.data[i]]
        return InducedMap(earlier.degree, prod, earlier.source_moduli, self.target_moduli)


def induced_on_homology(nu, degrees, window_radius=None):
    """Matrices of the induced map per degree, in canonical presentations."""
    degrees = sorted(degrees)
    src = ComplexHomology(nu.source, degrees, window_radius)
    tgt_radius = window_radius
    if nu.target.is_windowed() and window_radius is not None:
        tgt_radius = window_radius + _entry_spread(nu)
    tgt = ComplexHomology(nu.target, degrees, tgt_radius)
    out = []
    for d in degrees:
        sp = src.presentations[d]
        tp = tgt.presentations[d]
        cols = []
        for i in range(sp.n_generators):
            image = apply_chain_map(nu, src.generator_chain(d, i), check=False)
            cols.append(tp.reduce(tgt.chain_vector(image, d)))
        mat = IntMatrix.from_columns(cols, rows=tp.n_generators)
        out.append(InducedMap(d, mat, sp.moduli, tp.moduli))
    return out


def _entry_spread(nu):
    spread = 0
    for el in nu.entries.values():
        for word in el.terms:
            spread = max(spread, max((abs(e) for e in word), default=0))
    return spread


def restrict_to_level(nu, level):
    """Restriction of a filtration-preserving system to sublevel complexes."""
    from .twisted import filtered_subcomplex

    if filtration_shift(nu) > 0:
        raise ActionsMissing(
            "only filtration-preserving systems restrict to sublevel complexes")
    sub_source = filtered_subcomplex(nu.source, level)
    sub_target = filtered_subcomplex(nu.target, level)
    entries = {}
    for (x, y), el in nu.entries.items():
        if x in sub_source.gen_index and y in sub_target.gen_index:
            entries[x, y] = el
    return ContinuationCocycle(f"{nu.name}<{level}", sub_source, sub_target, entries)


def inclusion_cocycle(sub, big):
    """Sublevel inclusion as a continuation system (unit on shared generators)."""
    unit = big.algebra.unit_element()
    entries = {(g.name, g.name): unit for g in sub.generators
               if g.name in big.gen_index}
    return ContinuationCocycle(f"incl[{sub.name}->{big.name}]", sub, big, entries)


class MonotoneTower:
    """A finite chain of complexes linked by filtration-preserving maps.

    This is the finite stand-in for a directed system of action-filtered
    complexes: the "limit" homology is the homology of the final stage, and
    the ladder records the induced maps along the tower.
    """

    def __init__(self, complexes, maps):
        if len(maps) != len(complexes) - 1:
            raise EndpointMismatch("a tower needs one map between consecutive stages")
        for i, nu in enumerate(maps):
            if nu.source is not complexes[i] or nu.target is not complexes[i + 1]:
                raise EndpointMismatch(f"map {i} does not link stages {i} and {i + 1}")
            if filtration_shift(nu) > 0:
                raise ActionsMissing(f"stage-{i} map does not preserve the filtration")
        self.complexes = list(complexes)
        self.maps = list(maps)

    def final_homology(self, degrees, window_radius=None):
        from .twisted import homology

        return homology(self.complexes[-1], degrees, window_radius=window_radius)

    def ladder(self, degrees, window_radius=None):
        return [induced_on_homology(nu, degrees, window_radius) for nu in self.maps]

    def filtered(self, level):
        subs = [None] * len(self.complexes)
        maps = []
        from .twisted import filtered_subcomplex

        for i, cx in enumerate(self.complexes):
            subs[i] = filtered_subcomplex(cx, level)
        for i, nu in enumerate(self.maps):
            entries = {(x, y): el for (x, y), el in nu.entries.items()
                       if x in subs[i].gen_index and y in subs[i + 1].gen_index}
            maps.append(ContinuationCocycle(f"{nu.name}<{level}", subs[i],
                                            subs[i + 1], entries))
        return MonotoneTower(subs, maps)
