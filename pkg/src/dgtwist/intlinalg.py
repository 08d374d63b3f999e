"""Exact integer and rational linear algebra.

Everything here works with arbitrary-precision Python integers (or
``fractions.Fraction`` in the rational helpers); no floating point is used
anywhere.  The normal forms are the classical ones:

* ``smith_normal_form`` returns (D, U, V) with U*M*V = D, U and V unimodular
  and the diagonal of D a divisibility chain.  Pivots are chosen with minimal
  absolute value to limit coefficient growth.
* ``hermite_column_basis`` computes a column-style Hermite basis of the
  lattice spanned by the columns of a matrix; it backs the lattice membership
  and containment tests.

On top of these, ``homology_at`` presents ker/im quotients as finitely
generated abelian groups (free rank plus a divisibility chain of torsion
coefficients), and ``QuotientPresentation`` retains enough data to reduce a
cycle to canonical coordinates in the quotient.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import CompositionNonzero, DimensionMismatch


class IntMatrix:
    """A dense matrix of exact integers."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows, cols, data=None):
        self.rows = rows
        self.cols = cols
        if data is None:
            self.data = [[0] * cols for _ in range(rows)]
        else:
            if len(data) != rows or any(len(r) != cols for r in data):
                raise DimensionMismatch(f"expected {rows}x{cols} data")
            self.data = [list(r) for r in data]

    @classmethod
    def from_rows(cls, data):
        rows = len(data)
        cols = len(data[0]) if rows else 0
        return cls(rows, cols, data)

    @classmethod
    def from_columns(cls, columns, rows=None):
        if not columns:
            if rows is None:
                raise DimensionMismatch("empty column list needs an explicit row count")
            return cls(rows, 0)
        rows = len(columns[0])
        data = [[col[i] for col in columns] for i in range(rows)]
        return cls(rows, len(columns), data)

    @classmethod
    def identity(cls, n):
        m = cls(n, n)
        for i in range(n):
            m.data[i][i] = 1
        return m

    def copy(self):
        return IntMatrix(self.rows, self.cols, self.data)

    def column(self, j):
        return [self.data[i][j] for i in range(self.rows)]

    def columns(self):
        return [self.column(j) for j in range(self.cols)]

    def transpose(self):
        out = IntMatrix(self.cols, self.rows)
        for i in range(self.rows):
            for j in range(self.cols):
                out.data[j][i] = self.data[i][j]
        return out

    def __eq__(self, other):
        return (
            isinstance(other, IntMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.data == other.data
        )

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(tuple(r) for r in self.data)))

    def __repr__(self):
        return f"IntMatrix({self.rows}x{self.cols}, {self.data})"

    def is_zero(self):
        return all(v == 0 for row in self.data for v in row)

    def __mul__(self, other):
        if isinstance(other, IntMatrix):
            if self.cols != other.rows:
                raise DimensionMismatch(f"{self.rows}x{self.cols} * {other.rows}x{other.cols}")
            out = IntMatrix(self.rows, other.cols)
            for i in range(self.rows):
                srow = self.data[i]
                orow = out.data[i]
                for k in range(self.cols):
                    a = srow[k]
                    if a:
                        brow = other.data[k]
                        for j in range(other.cols):
                            if brow[j]:
                                orow[j] += a * brow[j]
            return out
        return NotImplemented

    def __add__(self, other):
        if self.rows != other.rows or self.cols != other.cols:
            raise DimensionMismatch("shape mismatch in addition")
        return IntMatrix(
            self.rows, self.cols,
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.data, other.data)],
        )

    def __sub__(self, other):
        if self.rows != other.rows or self.cols != other.cols:
            raise DimensionMismatch("shape mismatch in subtraction")
        return IntMatrix(
            self.rows, self.cols,
            [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.data, other.data)],
        )

    def __neg__(self):
        return IntMatrix(self.rows, self.cols, [[-a for a in r] for r in self.data])

    def apply(self, vector):
        if len(vector) != self.cols:
            raise DimensionMismatch("vector length mismatch")
        return [sum(self.data[i][j] * vector[j] for j in range(self.cols)) for i in range(self.rows)]

    def hstack(self, other):
        if self.rows != other.rows:
            raise DimensionMismatch("row mismatch in hstack")
        return IntMatrix(self.rows, self.cols + other.cols,
                         [r1 + r2 for r1, r2 in zip(self.data, other.data)])


def _find_pivot(a, s, rows, cols):
    """Position of a nonzero entry of minimal absolute value in the block >= (s, s)."""
    best = None
    best_val = 0
    for i in range(s, rows):
        row = a[i]
        for j in range(s, cols):
            v = row[j]
            if v != 0 and (best is None or abs(v) < best_val):
                best = (i, j)
                best_val = abs(v)
                if best_val == 1:
                    return best
    return best


def smith_normal_form(m, transforms=True):
    """Return (D, U, V) with U*M*V = D in Smith normal form.

    D is diagonal with d_1 | d_2 | ... and nonnegative diagonal entries; U and
    V are unimodular.  With ``transforms=False`` the U/V accumulation is
    skipped and (D, None, None) is returned.
    """
    rows, cols = m.rows, m.cols
    a = [list(r) for r in m.data]
    u = IntMatrix.identity(rows) if transforms else None
    v = IntMatrix.identity(cols) if transforms else None

    s = 0
    n = min(rows, cols)
    while s < n:
        piv = _find_pivot(a, s, rows, cols)
        if piv is None:
            break
        pi, pj = piv
        if pi != s:
            a[s], a[pi] = a[pi], a[s]
            if u is not None:
                u.data[s], u.data[pi] = u.data[pi], u.data[s]
        if pj != s:
            for row in a:
                row[s], row[pj] = row[pj], row[s]
            if v is not None:
                for row in v.data:
                    row[s], row[pj] = row[pj], row[s]

        # Clear the row and column of the pivot; restart if a remainder
        # produced a smaller candidate elsewhere in the eliminated line.
        dirty = False
        p = a[s][s]
        for i in range(s + 1, rows):
            if a[i][s]:
                q = a[i][s] // p
                if q:
                    arow, srow = a[i], a[s]
                    for j in range(s, cols):
                        arow[j] -= q * srow[j]
                    if u is not None:
                        urow, usrow = u.data[i], u.data[s]
                        for j in range(rows):
                            urow[j] -= q * usrow[j]
                if a[i][s]:
                    dirty = True
        for j in range(s + 1, cols):
            if a[s][j]:
                q = a[s][j] // p
                if q:
                    for i in range(s, rows):
                        a[i][j] -= q * a[i][s]
                    if v is not None:
                        for i in range(cols):
                            v.data[i][j] -= q * v.data[i][s]
                if a[s][j]:
                    dirty = True
        if dirty:
            continue

        # Divisibility: pull in any entry the pivot does not divide.
        offender = None
        for i in range(s + 1, rows):
            row = a[i]
            for j in range(s + 1, cols):
                if row[j] % p:
                    offender = (i, j)
                    break
            if offender:
                break
        if offender:
            oi = offender[0]
            arow, srow = a[oi], a[s]
            for j in range(s, cols):
                srow[j] += arow[j]
            if u is not None:
                urow, usrow = u.data[oi], u.data[s]
                for j in range(rows):
                    usrow[j] += urow[j]
            continue

        if a[s][s] < 0:
            for j in range(s, cols):
                a[s][j] = -a[s][j]
            if u is not None:
                u.data[s] = [-x for x in u.data[s]]
        s += 1

    d = IntMatrix(rows, cols)
    for i in range(min(rows, cols)):
        d.data[i][i] = a[i][i]  # pivots were sign-normalized in the loop
    return (d, u, v) if transforms else (d, None, None)


def rank(m):
    d, _, _ = smith_normal_form(m, transforms=False)
    return sum(1 for i in range(min(m.rows, m.cols)) if d.data[i][i])


def invariant_factors(m):
    """Nonzero diagonal entries of the Smith form."""
    d, _, _ = smith_normal_form(m, transforms=False)
    return [d.data[i][i] for i in range(min(m.rows, m.cols)) if d.data[i][i]]


def unimodular_inverse(u):
    """Exact inverse of a unimodular integer matrix."""
    n = u.rows
    if n != u.cols:
        raise DimensionMismatch("inverse of a non-square matrix")
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(u.data)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            raise DimensionMismatch("matrix is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [x / pv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    inv = IntMatrix(n, n)
    for i in range(n):
        for j in range(n):
            q = aug[i][n + j]
            if q.denominator != 1:
                raise DimensionMismatch("matrix is not unimodular")
            inv.data[i][j] = q.numerator
    return inv


def kernel_lattice(m):
    """Columns form a Z-basis of {v : M v = 0}."""
    d, _, v = smith_normal_form(m)
    r = sum(1 for i in range(min(m.rows, m.cols)) if d.data[i][i])
    basis = [v.column(j) for j in range(r, m.cols)]
    return IntMatrix.from_columns(basis, rows=m.cols)


def hermite_column_basis(m):
    """Column-style Hermite basis of the column lattice of ``m``.

    Returns a list of columns, each with a leading nonzero entry (pivot) in a
    strictly increasing row, pivots positive.  Zero columns are dropped, so
    the result is a basis of the lattice spanned by the input columns.
    """
    cols = [list(c) for c in m.columns()]
    basis = []  # list of (pivot_row, column)
    for vec in cols:
        vec = list(vec)
        while True:
            lead = next((i for i, x in enumerate(vec) if x), None)
            if lead is None:
                break
            slot = next((k for k, (p, _) in enumerate(basis) if p >= lead), len(basis))
            if slot == len(basis) or basis[slot][0] > lead:
                if vec[lead] < 0:
                    vec = [-x for x in vec]
                basis.insert(slot, (lead, vec))
                break
            # Same pivot row: combine via extended gcd.
            p, bvec = basis[slot]
            a, b = bvec[lead], vec[lead]
            g, x, y = _xgcd(a, b)
            new_b = [x * u + y * w for u, w in zip(bvec, vec)]
            new_v = [(-(b // g)) * u + (a // g) * w for u, w in zip(bvec, vec)]
            basis[slot] = (lead, new_b)
            vec = new_v
    # Reduce entries above each pivot for canonical form.
    for k in range(len(basis) - 1, -1, -1):
        p, col = basis[k]
        for j in range(k):
            _, other = basis[j]
            if other[p]:
                q = other[p] // col[p]
                if q:
                    basis[j] = (basis[j][0], [u - q * w for u, w in zip(other, col)])
    return [col for _, col in basis]


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    g, r = a, b
    while r:
        q = g // r
        g, r = r, g - q * r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return g, x0, y0


def lattice_member(basis_cols, vector):
    """Whether ``vector`` lies in the lattice spanned by Hermite basis columns."""
    v = list(vector)
    for col in basis_cols:
        lead = next(i for i, x in enumerate(col) if x)
        while any(v[:lead]):
            # Entries above this pivot can only be cleared by earlier columns,
            # which the caller ordered first; reaching here means failure.
            return False
        if v[lead]:
            if v[lead] % col[lead]:
                return False
            q = v[lead] // col[lead]
            v = [a - q * b for a, b in zip(v, col)]
    return not any(v)


def lattice_contained(k1, k2):
    """True iff every column of k1 lies in the Z-span of k2's columns."""
    if k1.rows != k2.rows:
        raise DimensionMismatch(f"{k1.rows} rows vs {k2.rows} rows")
    basis = hermite_column_basis(k2)
    return all(lattice_member(basis, c) for c in k1.columns())


def lattice_basis(m):
    """An IntMatrix whose columns are a basis of the column lattice of ``m``."""
    return IntMatrix.from_columns(hermite_column_basis(m), rows=m.rows)


def saturate_lattice(m):
    """Saturation of the column lattice: (Q-span of columns) intersect Z^n."""
    if m.cols == 0:
        return m.copy()
    d, u, _ = smith_normal_form(m)
    r = sum(1 for i in range(min(m.rows, m.cols)) if d.data[i][i])
    uinv = unimodular_inverse(u)
    # Q-span of columns = Q-span of the first r columns of U^{-1}; those
    # columns are a basis of the saturation.
    return IntMatrix.from_columns([uinv.column(i) for i in range(r)], rows=m.rows)


class LatticeSolver:
    """Repeated exact solves M x = v over Z, one Smith decomposition."""

    def __init__(self, matrix):
        self.matrix = matrix
        self._d, self._u, self._v = smith_normal_form(matrix)

    def solve(self, vector):
        m = self.matrix
        w = self._u.apply(vector)
        n = min(m.rows, m.cols)
        y = [0] * m.cols
        for i in range(m.rows):
            di = self._d.data[i][i] if i < n else 0
            if di:
                if w[i] % di:
                    return None
                y[i] = w[i] // di
            elif w[i]:
                return None
        return self._v.apply(y)


def solve_in_lattice(basis_matrix, vector):
    """Solve basis_matrix * x = vector over Z; ``None`` if no solution.

    ``basis_matrix`` need not have independent columns.
    """
    return LatticeSolver(basis_matrix).solve(vector)


@dataclass(frozen=True)
class HomologyGroup:
    """A finitely generated abelian group: Z^free_rank + sum Z/d_i.

    The torsion coefficients satisfy d_1 | d_2 | ... and each d_i >= 2, which
    makes the representation unique.
    """

    free_rank: int
    torsion: tuple = ()

    def __post_init__(self):
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError(f"torsion {self.torsion} is not a divisibility chain")
        if any(d < 2 for d in self.torsion):
            raise ValueError("torsion coefficients must be >= 2")

    @property
    def is_trivial(self):
        return self.free_rank == 0 and not self.torsion

    def order(self):
        """Order of the torsion part."""
        n = 1
        for d in self.torsion:
            n *= d
        return n

    def __str__(self):
        parts = ["Z"] * self.free_rank + [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"


class QuotientPresentation:
    """Presentation of N/B for lattices B <= N <= Z^n.

    Canonical generators come from the Smith normal form of the coordinate
    matrix of B in a basis of N: first the torsion generators (in divisibility
    order), then the free generators.  ``reduce`` maps an ambient vector of N
    to its coordinates on those generators (torsion coordinates reduced mod
    d_i); ``lift`` returns an ambient representative of a generator.
    """

    def __init__(self, numerator_basis, denominator_gens):
        self.numerator = numerator_basis  # IntMatrix, columns independent
        self._solver = LatticeSolver(numerator_basis)
        k = numerator_basis.cols
        coords = []
        for col in denominator_gens.columns():
            x = self._solver.solve(col)
            if x is None:
                raise DimensionMismatch("denominator is not contained in numerator lattice")
            coords.append(x)
        x_matrix = IntMatrix.from_columns(coords, rows=k)
        d, u, _ = smith_normal_form(x_matrix)
        self._u = u
        self._uinv_cache = None
        invs = [d.data[i][i] for i in range(min(d.rows, d.cols))]
        invs += [0] * (k - len(invs))
        # keep indices with d != 1; order them torsion first, then free
        self._kept = [i for i in range(k) if invs[i] != 1]
        self._kept.sort(key=lambda i: (invs[i] == 0, i))
        self.moduli = tuple(invs[i] for i in self._kept)
        self.group = HomologyGroup(
            free_rank=sum(1 for m in self.moduli if m == 0),
            torsion=tuple(m for m in self.moduli if m >= 2),
        )

    @property
    def _uinv(self):
        if self._uinv_cache is None:
            self._uinv_cache = unimodular_inverse(self._u)
        return self._uinv_cache

    @property
    def n_generators(self):
        return len(self._kept)

    def reduce(self, vector):
        """Coordinates of an ambient vector of N on the canonical generators."""
        x = self._solver.solve(vector)
        if x is None:
            raise DimensionMismatch("vector is not in the numerator lattice")
        beta = self._u.apply(x)
        return [beta[i] % m if m else beta[i]
                for i, m in zip(self._kept, self.moduli)]

    def is_zero(self, vector):
        return all(c == 0 for c in self.reduce(vector))

    def lift(self, index):
        """Ambient representative of canonical generator ``index``."""
        i = self._kept[index]
        return self.numerator.apply(self._uinv.column(i))


def lattice_quotient(numerator_gens, denominator_gens):
    """Presentation of (lattice spanned by numerator)/(lattice spanned by denominator)."""
    basis = lattice_basis(numerator_gens)
    return QuotientPresentation(basis, denominator_gens)


def homology_at(d_in, d_out):
    """Homology ker(d_out)/im(d_in) as a HomologyGroup.

    ``d_in`` maps C_{k+1} -> C_k and ``d_out`` maps C_k -> C_{k-1}; both are
    matrices over Z.  Raises CompositionNonzero if d_out * d_in != 0.
    """
    return homology_presentation(d_in, d_out).group


def homology_presentation(d_in, d_out):
    if d_in.rows != d_out.cols:
        raise DimensionMismatch(
            f"chain group dimension mismatch: {d_in.rows} vs {d_out.cols}")
    comp = d_out * d_in
    for i in range(comp.rows):
        for j in range(comp.cols):
            if comp.data[i][j]:
                raise CompositionNonzero(i, j, comp.data[i][j])
    kernel = kernel_lattice(d_out)
    return QuotientPresentation(kernel, d_in)


# ---------------------------------------------------------------------------
# Rational helpers (exact, Fraction-based)

def rational_rank(m):
    a = [[Fraction(x) for x in row] for row in m.data]
    rows, cols = m.rows, m.cols
    r = 0
    for col in range(cols):
        piv = next((i for i in range(r, rows) if a[i][col]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        pv = a[r][col]
        a[r] = [x / pv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][col]:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == rows:
            break
    return r


def rational_solvable(m, vector):
    """Whether M x = v has a rational solution."""
    aug = IntMatrix(m.rows, m.cols + 1,
                    [row + [vector[i]] for i, row in enumerate(m.data)])
    return rational_rank(aug) == rational_rank(m)
