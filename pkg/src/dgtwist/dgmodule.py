"""Right DG modules over a DGA.

Two shapes are supported:

* ``finite``: a finite basis of words per degree (negative degrees allowed
  through a declared minimum).  Over a table DGA the action is a sparse
  structure-constant table; over a Laurent DGA the action is given per
  group-ring generator by a Z-invertible matrix on the basis (the classical
  "monodromy" picture of a local system concentrated in finitely many
  degrees).
* ``free``: the free module of finite rank over a Laurent DGA.  Module words
  are (basename, exponent vector) pairs, the action of a monomial shifts the
  exponent.  These modules have infinite rank over Z per degree, so homology
  and matrix assembly are only available through exponent windows
  (see :mod:`dgtwist.twisted`).

A rank-1 twist is recorded as a wrapper: the twisted module acts through
``phi_twist`` before the base action, which is exactly the classical
"tensor with a rank-1 local system" operation.
"""

from __future__ import annotations

from .dga import LaurentDGA, Rank1LocalSystem, TableDGA, phi_twist
from .errors import MixedAlgebra, TruncationExceeded
from .intlinalg import IntMatrix, homology_at
from .validation import ValidationReport


class ModuleElement:
    """Finite linear combination of module words."""

    __slots__ = ("module", "terms")

    def __init__(self, module, terms=None):
        self.module = module
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
        return (isinstance(other, ModuleElement)
                and self.module is other.module and self.terms == other.terms)

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return ModuleElement(self.module, out)

    def __sub__(self, other):
        self._check(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) - c
        return ModuleElement(self.module, out)

    def __neg__(self):
        return ModuleElement(self.module, {w: -c for w, c in self.terms.items()})

    def scale(self, c):
        return ModuleElement(self.module, {w: c * v for w, v in self.terms.items()})

    def _check(self, other):
        if self.module is not other.module:
            raise MixedAlgebra("elements belong to different modules")

    def degree(self):
        degs = {self.module.word_degree(w) for w in self.terms}
        if not degs:
            return None
        if len(degs) > 1:
            raise ValueError(f"element is not homogeneous: degrees {sorted(degs)}")
        return degs.pop()

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = [f"{c}*{self.module.word_name(w)}"
                for w, c in sorted(self.terms.items(), key=lambda it: repr(it[0]))]
        return " + ".join(bits).replace("+ -", "- ")


class DGModule:
    """A right DG module, either of finite rank or free over a Laurent ring."""

    def __init__(self, name, algebra, basis, differential=None, action=None,
                 generator_actions=None, module_kind="finite",
                 strict_truncation=False, twist=None):
        """``basis``: dict degree -> word names (``free`` kind: every name is
        a basename and the exponent part is implicit).  ``differential``:
        dict basename -> terms.  ``action``: table backend, dict
        (module word, algebra word) -> terms.  ``generator_actions``: Laurent
        monodromy, dict group generator name -> {module word: terms}.
        """
        self.name = name
        self.algebra = algebra
        self.module_kind = module_kind
        self.basis = {d: tuple(ws) for d, ws in sorted(basis.items())}
        self.degree_table = {}
        for d, ws in self.basis.items():
            for w in ws:
                if w in self.degree_table:
                    raise ValueError(f"duplicate module word {w!r}")
                self.degree_table[w] = d
        self.min_degree = min(self.basis) if self.basis else 0
        self.top_degree = max(self.basis) if self.basis else 0
        self.diff = {w: dict(v) for w, v in (differential or {}).items()}
        self.action = {k: dict(v) for k, v in (action or {}).items()}
        self.generator_actions = {g: {w: dict(t) for w, t in table.items()}
                                  for g, table in (generator_actions or {}).items()}
        self.strict_truncation = strict_truncation
        self.twist = twist
        if module_kind == "free" and not isinstance(algebra, LaurentDGA):
            raise ValueError("free modules are only supported over Laurent group rings")

    # -- words -------------------------------------------------------------
    def word_degree(self, w):
        if self.module_kind == "free":
            return self.degree_table[w[0]]
        return self.degree_table[w]

    def word_name(self, w):
        if self.module_kind == "free":
            base, exp = w
            mono = self.algebra.word_name(exp)
            return base if mono == "1" else f"{mono}*{base}"
        return w

    def words_of_degree(self, d):
        if self.module_kind == "free":
            raise TruncationExceeded(
                "a free module over a group ring has infinite rank per degree; "
                "use an exponent window")
        return self.basis.get(d, ())

    def is_finite_rank(self):
        return self.module_kind != "free"

    def zero(self):
        return ModuleElement(self, {})

    def element(self, terms):
        return ModuleElement(self, terms)

    def basis_element(self, word, exponent=None):
        if self.module_kind == "free":
            exp = tuple(exponent) if exponent is not None else self.algebra.unit
            return ModuleElement(self, {(word, exp): 1})
        return ModuleElement(self, {word: 1})

    # -- structure maps ------------------------------------------------------
    def differential(self, m):
        out = {}
        for w, c in m.terms.items():
            if self.module_kind == "free":
                base, exp = w
                for (b2, e2), c2 in self.diff.get(base, {}).items():
                    key = (b2, tuple(a + b for a, b in zip(e2, exp)))
                    out[key] = out.get(key, 0) + c * c2
            else:
                for w2, c2 in self.diff.get(w, {}).items():
                    out[w2] = out.get(w2, 0) + c * c2
        return ModuleElement(self, out)

    def act(self, m, a):
        """Right action m . a of an algebra element on a module element."""
        if a.alg is not self.algebra:
            raise MixedAlgebra("algebra element is over a different DGA")
        if self.twist is not None:
            a = phi_twist(self.twist, a)
        out = {}
        for w, cm in m.terms.items():
            for aw, ca in a.terms.items():
                for w2, c2 in self._act_word(w, aw).items():
                    coeff = cm * ca * c2
                    if coeff:
                        out[w2] = out.get(w2, 0) + coeff
        return ModuleElement(self, out)

    def _act_word(self, mw, aw):
        if self.module_kind == "free":
            base, exp = mw
            return {(base, tuple(a + b for a, b in zip(exp, aw))): 1}
        if isinstance(self.algebra, LaurentDGA):
            return self._act_monomial(mw, aw)
        # table backend
        if aw == self.algebra.unit:
            return {mw: 1}
        if (mw, aw) in self.action:
            return self.action[mw, aw]
        result_degree = self.word_degree(mw) + self.algebra.word_degree(aw)
        if result_degree > self.top_degree and self.strict_truncation:
            raise TruncationExceeded(
                f"action {mw}*{aw} leaves the declared degree range "
                f"(degree {result_degree} > {self.top_degree})")
        return {}

    def _act_monomial(self, mw, exponents):
        terms = {mw: 1}
        for gen, e in zip(self.algebra.generators, exponents):
            if not e:
                continue
            table = self.generator_actions.get(gen)
            if table is None:
                raise TruncationExceeded(f"no action declared for generator {gen!r}")
            if e < 0:
                table = self._inverse_action(gen)
            for _ in range(abs(e)):
                nxt = {}
                for w, c in terms.items():
                    for w2, c2 in table.get(w, {}).items():
                        nxt[w2] = nxt.get(w2, 0) + c * c2
                terms = nxt
        return terms

    def _inverse_action(self, gen):
        cache = getattr(self, "_inv_cache", None)
        if cache is None:
            cache = self._inv_cache = {}
        if gen in cache:
            return cache[gen]
        words = [w for d in sorted(self.basis) for w in self.basis[d]]
        idx = {w: i for i, w in enumerate(words)}
        mat = IntMatrix(len(words), len(words))
        for w, targets in self.generator_actions[gen].items():
            for w2, c in targets.items():
                mat.data[idx[w2]][idx[w]] = c
        from .intlinalg import unimodular_inverse
        inv = unimodular_inverse(mat)
        table = {}
        for j, w in enumerate(words):
            table[w] = {words[i]: inv.data[i][j] for i in range(len(words)) if inv.data[i][j]}
        cache[gen] = table
        return table


def module_from_dga(alg, name=None):
    """The DGA as a right module over itself."""
    name = name or f"{getattr(alg, 'name', 'A')}-module"
    if isinstance(alg, LaurentDGA):
        return DGModule(name, alg, {0: ("one",)},
                        differential={}, module_kind="free")
    basis = {d: tuple(ws) for d, ws in alg.basis.items()}
    action = {}
    for d1, ws1 in alg.basis.items():
        for w1 in ws1:
            for d2, ws2 in alg.basis.items():
                if d1 + d2 > alg.truncation:
                    continue
                for w2 in ws2:
                    if w2 == alg.unit:
                        continue
                    action[w1, w2] = dict(alg.word_product(w1, w2))
    diff = {w: dict(alg.word_differential(w)) for ws in basis.values() for w in ws
            if alg.word_differential(w)}
    return DGModule(name, alg, basis, differential=diff, action=action,
                    strict_truncation=True)


def twist_by_rank1(module, system):
    """Same underlying complex; the action is routed through the twist."""
    if system.alg is not module.algebra:
        raise MixedAlgebra("module and local system are over different DGAs")
    twist = system if module.twist is None else module.twist.tensor(system)
    return DGModule(
        f"{module.name}@twist", module.algebra, module.basis,
        differential=module.diff, action=module.action,
        generator_actions=module.generator_actions,
        module_kind=module.module_kind,
        strict_truncation=module.strict_truncation, twist=twist)


def validate_module(module, report=None):
    """Check the module axioms on basis tuples within truncation."""
    report = report if report is not None else ValidationReport()
    alg = module.algebra
    words = [w for d in sorted(module.basis) for w in module.basis[d]]

    # differential grading and d^2 = 0
    for w in words:
        el = module.basis_element(w)
        dw = module.differential(el)
        if dw:
            degs = {module.word_degree(t) for t in dw.terms}
            if degs != {module.degree_table[w] - 1}:
                report.add("module-differential-grading", (w,),
                           f"differential degrees {sorted(degs)}")
        if module.differential(dw):
            report.add("module-d-squared", (w,), f"residual {module.differential(dw)!r}")

    if isinstance(alg, LaurentDGA):
        _validate_laurent_module(module, words, report)
        return report

    algebra_words = [w for d in sorted(alg.basis) for w in alg.basis[d] if d > 0 or w != alg.unit]

    for mw in words:
        el = module.basis_element(mw)
        if module.act(el, alg.unit_element()) != el:
            report.add("module-unit-law", (mw,))

    def _try(fn):
        try:
            return fn()
        except TruncationExceeded:
            return None

    for mw in words:
        for a in algebra_words:
            el = module.basis_element(mw)
            xa = alg.element({a: 1})
            ma = _try(lambda: module.act(el, xa))
            if ma is None:
                continue
            if ma:
                target = module.word_degree(mw) + alg.word_degree(a)
                degs = {module.word_degree(t) for t in ma.terms}
                if degs != {target}:
                    report.add("module-action-grading", (mw, a),
                               f"action degrees {sorted(degs)}, expected {target}")
            # Leibniz
            lhs = _try(lambda: module.differential(ma))
            sign = -1 if module.word_degree(mw) % 2 else 1
            rhs_second = _try(lambda: module.act(el, alg.differential(xa)))
            if lhs is not None and rhs_second is not None:
                rhs = module.act(module.differential(el), xa) + rhs_second.scale(sign)
                if lhs != rhs:
                    report.add("module-leibniz", (mw, a), f"residual {(lhs - rhs)!r}")
            for b in algebra_words:
                xb = alg.element({b: 1})
                ab = _try(lambda: xa * xb)
                if ab is None:
                    continue
                left = _try(lambda: module.act(ma, xb))
                right = _try(lambda: module.act(el, ab))
                if left is not None and right is not None and left != right:
                    report.add("module-associativity", (mw, a, b),
                               f"(m*a)*b = {left!r} != m*(a*b) = {right!r}")
    return report


def _validate_laurent_module(module, words, report):
    alg = module.algebra
    if module.module_kind == "free":
        return  # the shift action satisfies every axiom identically
    idx = {w: i for i, w in enumerate(words)}
    mats = {}
    for gen in alg.generators:
        table = module.generator_actions.get(gen)
        if table is None:
            report.add("module-action-missing", (gen,), "no action for group generator")
            continue
        mat = IntMatrix(len(words), len(words))
        for w, targets in table.items():
            for w2, c in targets.items():
                if module.word_degree(w2) != module.word_degree(w):
                    report.add("module-action-grading", (w, gen),
                               "degree-0 generator must preserve module degree")
                mat.data[idx[w2]][idx[w]] = c
        mats[gen] = mat
        from .intlinalg import rational_rank
        if rational_rank(mat) < len(words):
            report.add("module-action-invertible", (gen,),
                       "group generator must act invertibly")
        else:
            try:
                module._inverse_action(gen)
            except Exception:
                report.add("module-action-invertible", (gen,),
                           "action matrix is not invertible over Z")
    gens = list(mats)
    for i, g1 in enumerate(gens):
        for g2 in gens[i + 1:]:
            if mats[g1] * mats[g2] != mats[g2] * mats[g1]:
                report.add("module-action-commuting", (g1, g2),
                           "commuting group generators must act commutingly")
    # Leibniz with zero algebra differential: d must commute with the action.
    for gen in gens:
        for w in words:
            el = module.basis_element(w)
            ga = alg.generator(gen)
            lhs = module.differential(module.act(el, ga))
            rhs = module.act(module.differential(el), ga)
            if lhs != rhs:
                report.add("module-leibniz", (w, gen), f"residual {(lhs - rhs)!r}")


def module_homology(module, degree_range):
    """Homology of (module, differential) per degree; finite-rank kind only."""
    if not module.is_finite_rank():
        raise TruncationExceeded(
            "homology of a free module over a group ring has infinite rank; "
            "compute it through a twisted complex window instead")
    out = []
    for d in degree_range:
        d_out = module_boundary_matrix(module, d)
        d_in = module_boundary_matrix(module, d + 1)
        out.append(homology_at(d_in, d_out))
    return out


def module_boundary_matrix(module, d):
    """Matrix of the module differential from degree d to degree d-1."""
    source = module.words_of_degree(d)
    target = module.words_of_degree(d - 1)
    tidx = {w: i for i, w in enumerate(target)}
    mat = IntMatrix(len(target), len(source))
    for j, w in enumerate(source):
        dw = module.differential(module.basis_element(w))
        for w2, c in dw.terms.items():
            mat.data[tidx[w2]][j] = c
    return mat
