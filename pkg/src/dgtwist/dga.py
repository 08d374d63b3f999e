"""Differential graded algebras with two computable backends.

``TableDGA`` stores a finite basis per degree up to a truncation bound,
structure constants for the product, and a degree minus-one differential.
``LaurentDGA`` is the group ring of a free abelian group: commuting
invertible degree-0 generators, zero differential.  These two backends cover
the coefficient rings of all built-in models; general finitely presented
group rings are deliberately excluded (their word problems are undecidable).

Elements are finite linear combinations of basis words with exact integer
(or ``Fraction``) coefficients.  Basis words are strings for the table
backend and exponent tuples for the Laurent backend.

``Rank1LocalSystem`` attaches a unit of the ground ring to every degree-0
word, multiplicatively; ``phi_twist`` is the induced algebra endomorphism
that rescales each basis word by the value of its degree-0 corner.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import MissingCorner, MixedAlgebra, TruncationExceeded
from .validation import ValidationReport

DEFAULT_TRUNCATION = 12


class AlgebraElement:
    """A finite linear combination of basis words of a fixed DGA."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg, terms=None):
        self.alg = alg
        clean = {}
        if terms:
            for w, c in terms.items():
                if c:
                    clean[w] = clean.get(w, 0) + c
                    if not clean[w]:
                        del clean[w]
        self.terms = clean

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return (isinstance(other, AlgebraElement)
                and self.alg is other.alg and self.terms == other.terms)

    def __hash__(self):
        return hash((id(self.alg), tuple(sorted(self.terms.items(), key=repr))))

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return AlgebraElement(self.alg, out)

    def __sub__(self, other):
        self._check(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) - c
        return AlgebraElement(self.alg, out)

    def __neg__(self):
        return AlgebraElement(self.alg, {w: -c for w, c in self.terms.items()})

    def scale(self, c):
        return AlgebraElement(self.alg, {w: c * v for w, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return self.alg.multiply(self, other)
        return NotImplemented

    def _check(self, other):
        if self.alg is not other.alg:
            raise MixedAlgebra("elements belong to different algebras")

    def degree(self):
        """Degree of a homogeneous element; None for 0; raises otherwise."""
        degs = {self.alg.word_degree(w) for w in self.terms}
        if not degs:
            return None
        if len(degs) > 1:
            raise ValueError(f"element is not homogeneous: degrees {sorted(degs)}")
        return degs.pop()

    def is_homogeneous(self, degree):
        return all(self.alg.word_degree(w) == degree for w in self.terms)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda it: self.alg.word_sort_key(it[0]))

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for w, c in self.sorted_terms():
            name = self.alg.word_name(w)
            bits.append(f"{c}*{name}" if name != "1" else str(c))
        return " + ".join(bits).replace("+ -", "- ")


class DGA:
    """Common interface of the two backends."""

    kind = None

    def zero(self):
        return AlgebraElement(self, {})

    def element(self, terms):
        return AlgebraElement(self, terms)

    def unit_element(self):
        return AlgebraElement(self, {self.unit: 1})

    def multiply(self, a, b):
        if a.alg is not self or b.alg is not self:
            raise MixedAlgebra("operand belongs to a different algebra")
        out = {}
        for w1, c1 in a.terms.items():
            for w2, c2 in b.terms.items():
                for w, c in self.word_product(w1, w2).items():
                    coeff = c1 * c2 * c
                    if coeff:
                        out[w] = out.get(w, 0) + coeff
        return AlgebraElement(self, out)

    def differential(self, a):
        if a.alg is not self:
            raise MixedAlgebra("element belongs to a different algebra")
        out = {}
        for w, c in a.terms.items():
            for w2, c2 in self.word_differential(w).items():
                out[w2] = out.get(w2, 0) + c * c2
        return AlgebraElement(self, out)

    # Backend hooks -------------------------------------------------------
    def word_degree(self, w):
        raise NotImplementedError

    def word_product(self, w1, w2):
        raise NotImplementedError

    def word_differential(self, w):
        raise NotImplementedError

    def corner_of(self, w):
        raise NotImplementedError

    def words_of_degree(self, d):
        raise NotImplementedError

    def word_name(self, w):
        raise NotImplementedError

    def word_sort_key(self, w):
        raise NotImplementedError


class TableDGA(DGA):
    """Structure-constant backend, finite basis per degree up to a bound."""

    kind = "table"

    def __init__(self, name, truncation, basis, product, differential=None,
                 corners=None, unit=None):
        """``basis``: dict degree -> word names; ``product``: dict
        (w1, w2) -> {word: coeff}; ``differential``: dict w -> {word: coeff};
        ``corners``: dict w -> degree-0 word (defaults to the unit).
        """
        self.name = name
        self.truncation = truncation
        self.basis = {d: tuple(ws) for d, ws in sorted(basis.items())}
        self.degree_table = {}
        for d, ws in self.basis.items():
            for w in ws:
                if w in self.degree_table:
                    raise ValueError(f"duplicate basis word {w!r}")
                self.degree_table[w] = d
        self.unit = unit if unit is not None else self.basis.get(0, ("",))[0]
        if self.unit not in self.degree_table:
            raise ValueError(f"unit {self.unit!r} is not a basis word")
        self.product = {pair: dict(val) for pair, val in (product or {}).items()}
        self.diff = {w: dict(val) for w, val in (differential or {}).items()}
        self.corners = dict(corners or {})
        self._order = {w: (d, i) for d, ws in self.basis.items() for i, w in enumerate(ws)}

    def word_degree(self, w):
        try:
            return self.degree_table[w]
        except KeyError:
            raise KeyError(f"{w!r} is not a basis word of {self.name}") from None

    def word_product(self, w1, w2):
        if (w1, w2) in self.product:
            return self.product[w1, w2]
        if w1 == self.unit:
            return {w2: 1}
        if w2 == self.unit:
            return {w1: 1}
        total = self.word_degree(w1) + self.word_degree(w2)
        if total > self.truncation:
            raise TruncationExceeded(
                f"product {w1}*{w2} has degree {total} > truncation {self.truncation}")
        return {}

    def word_differential(self, w):
        return self.diff.get(w, {})

    def corner_of(self, w):
        if self.word_degree(w) == 0:
            return w
        corner = self.corners.get(w, self.unit)
        if corner not in self.degree_table or self.word_degree(corner) != 0:
            raise MissingCorner(f"word {w!r} has no degree-0 corner")
        return corner

    def words_of_degree(self, d):
        return self.basis.get(d, ())

    def word_name(self, w):
        return w

    def word_sort_key(self, w):
        return self._order[w]


class LaurentDGA(DGA):
    """Group ring of Z^k: commuting invertible degree-0 generators."""

    kind = "laurent_group_ring"

    def __init__(self, name, generators):
        self.name = name
        self.generators = tuple(generators)
        self.unit = (0,) * len(self.generators)

    def monomial(self, exponents):
        e = tuple(exponents)
        if len(e) != len(self.generators):
            raise ValueError("exponent vector length mismatch")
        return AlgebraElement(self, {e: 1})

    def generator(self, name_or_index, power=1):
        if isinstance(name_or_index, str):
            idx = self.generators.index(name_or_index)
        else:
            idx = name_or_index
        e = [0] * len(self.generators)
        e[idx] = power
        return self.monomial(e)

    def word_degree(self, w):
        return 0

    def word_product(self, w1, w2):
        return {tuple(a + b for a, b in zip(w1, w2)): 1}

    def word_differential(self, w):
        return {}

    def corner_of(self, w):
        return w

    def words_of_degree(self, d):
        raise TruncationExceeded(
            "a Laurent group ring has infinitely many words per degree; "
            "use an exponent window")

    def word_name(self, w):
        if not any(w):
            return "1"
        bits = []
        for g, e in zip(self.generators, w):
            if e == 1:
                bits.append(g)
            elif e:
                bits.append(f"{g}^{e}")
        return "*".join(bits)

    def word_sort_key(self, w):
        return w


def validate_dga(alg):
    """Check every DGA axiom within truncation; report all violations."""
    report = ValidationReport()
    if isinstance(alg, LaurentDGA):
        return report  # group ring axioms hold by construction
    n = alg.truncation
    words = [w for d in sorted(alg.basis) for w in alg.basis[d]]

    if alg.word_degree(alg.unit) != 0:
        report.add("unit-degree", (alg.unit,), "unit must have degree 0")

    for (w1, w2), val in alg.product.items():
        d = alg.word_degree(w1) + alg.word_degree(w2)
        for w, c in val.items():
            if c and (w not in alg.degree_table or alg.word_degree(w) != d):
                report.add("product-grading", (w1, w2),
                           f"term {w!r} is not a degree-{d} basis word")

    for w in words:
        e = alg.unit_element()
        x = alg.element({w: 1})
        if e * x != x:
            report.add("unit-law", (alg.unit, w), "left unit law fails")
        if x * e != x:
            report.add("unit-law", (w, alg.unit), "right unit law fails")

    for a in words:
        da = alg.word_degree(a)
        for b in words:
            dab = da + alg.word_degree(b)
            if dab > n:
                continue
            for c in words:
                if dab + alg.word_degree(c) > n:
                    continue
                xa, xb, xc = (alg.element({w: 1}) for w in (a, b, c))
                if (xa * xb) * xc != xa * (xb * xc):
                    report.add("associativity", (a, b, c))

    for w in words:
        dw = alg.differential(alg.element({w: 1}))
        target = alg.word_degree(w) - 1
        if dw and not dw.is_homogeneous(target):
            report.add("differential-grading", (w,),
                       f"differential is not homogeneous of degree {target}")
        if alg.differential(dw):
            report.add("d-squared", (w,), f"residual {alg.differential(dw)!r}")

    for a in words:
        for b in words:
            if alg.word_degree(a) + alg.word_degree(b) > n:
                continue
            xa = alg.element({a: 1})
            xb = alg.element({b: 1})
            lhs = alg.differential(xa * xb)
            sign = -1 if alg.word_degree(a) % 2 else 1
            rhs = alg.differential(xa) * xb + (xa * alg.differential(xb)).scale(sign)
            if lhs != rhs:
                report.add("leibniz", (a, b), f"residual {(lhs - rhs)!r}")

    for w, corner in alg.corners.items():
        if corner not in alg.degree_table or alg.word_degree(corner) != 0:
            report.add("corner", (w,), f"declared corner {corner!r} is not a degree-0 word")
    return report


class Rank1LocalSystem:
    """A multiplicative unit-valued weight on degree-0 words.

    For the table backend ``rho`` maps every degree-0 basis word to a unit of
    the ground ring; for the Laurent backend it maps every group-ring
    generator to a unit, and extends multiplicatively to monomials.  Ground
    ring "Z" restricts units to +-1; ground ring "Q" allows any nonzero
    rational.
    """

    def __init__(self, alg, rho, ground="Z", name=None):
        self.alg = alg
        self.ground = ground
        self.name = name
        self.rho = dict(rho)

    def value(self, word):
        """rho-hat of a degree-0 word."""
        if isinstance(self.alg, LaurentDGA):
            out = Fraction(1)
            for g, e in zip(self.alg.generators, word):
                if e:
                    out *= Fraction(self.rho[g]) ** e
            return int(out) if out.denominator == 1 else out
        if self.alg.word_degree(word) != 0:
            raise ValueError(f"{word!r} is not a degree-0 word")
        return self.rho[word]

    def corner_value(self, word):
        return self.value(self.alg.corner_of(word))

    def validate(self):
        report = ValidationReport()
        alg = self.alg
        if isinstance(alg, LaurentDGA):
            for g in alg.generators:
                v = self.rho.get(g)
                if v is None:
                    report.add("rank1-domain", (g,), "no value for generator")
                elif self.ground == "Z" and v not in (1, -1):
                    report.add("rank1-unit", (g,), f"{v} is not a unit of Z")
                elif not v:
                    report.add("rank1-unit", (g,), "zero is not a unit")
            return report
        zero_words = alg.words_of_degree(0)
        for w in zero_words:
            if w not in self.rho:
                report.add("rank1-domain", (w,), "no value for degree-0 word")
            elif self.ground == "Z" and self.rho[w] not in (1, -1):
                report.add("rank1-unit", (w,), f"{self.rho[w]} is not a unit of Z")
            elif not self.rho[w]:
                report.add("rank1-unit", (w,), "zero is not a unit")
        if not report.ok:
            return report
        if self.rho.get(alg.unit) != 1:
            report.add("rank1-unit-law", (alg.unit,), "rho(unit) must be 1")
        for w1 in zero_words:
            for w2 in zero_words:
                prod = alg.element({w1: 1}) * alg.element({w2: 1})
                lifted = sum(c * self.rho[w] for w, c in prod.terms.items())
                if lifted != self.rho[w1] * self.rho[w2]:
                    report.add("rank1-multiplicative", (w1, w2),
                               f"rho({w1}*{w2}) = {lifted} != {self.rho[w1] * self.rho[w2]}")
        return report

    def tensor(self, other):
        """Pointwise product system; twists compose through it."""
        if self.alg is not other.alg:
            raise MixedAlgebra("local systems live over different algebras")
        if isinstance(self.alg, LaurentDGA):
            keys = self.alg.generators
        else:
            keys = self.alg.words_of_degree(0)
        ground = "Q" if "Q" in (self.ground, other.ground) else "Z"
        return Rank1LocalSystem(
            self.alg, {k: self.rho[k] * other.rho[k] for k in keys}, ground)


def phi_twist(system, a):
    """Algebra endomorphism scaling each word by its corner's monodromy."""
    if a.alg is not system.alg:
        raise MixedAlgebra("element and local system algebras differ")
    out = {}
    for w, c in a.terms.items():
        v = system.corner_value(w)
        coeff = c * v
        if coeff:
            out[w] = out.get(w, 0) + coeff
    return AlgebraElement(a.alg, out)
