import random

import pytest

from dgtwist.errors import CompositionNonzero, DimensionMismatch
from dgtwist.intlinalg import (
    HomologyGroup,
    IntMatrix,
    hermite_column_basis,
    homology_at,
    homology_presentation,
    invariant_factors,
    kernel_lattice,
    lattice_contained,
    lattice_quotient,
    rational_rank,
    rational_solvable,
    saturate_lattice,
    smith_normal_form,
    solve_in_lattice,
    unimodular_inverse,
)


def det(m):
    # exact cofactor expansion; only used on small unimodular matrices
    n = m.rows
    if n == 0:
        return 1
    if n == 1:
        return m.data[0][0]
    total = 0
    for j in range(n):
        if m.data[0][j] == 0:
            continue
        minor = IntMatrix(n - 1, n - 1,
                          [[m.data[i][k] for k in range(n) if k != j] for i in range(1, n)])
        total += (-1) ** j * m.data[0][j] * det(minor)
    return total


def random_matrix(rng, rows, cols, lo=-9, hi=9):
    return IntMatrix(rows, cols, [[rng.randint(lo, hi) for _ in range(cols)] for _ in range(rows)])


class TestSmithNormalForm:
    def test_zero_1x1(self):
        d, u, v = smith_normal_form(IntMatrix(1, 1, [[0]]))
        assert d == IntMatrix(1, 1, [[0]])
        assert u == IntMatrix.identity(1)
        assert v == IntMatrix.identity(1)

    def test_hand_reduced_2x2(self):
        m = IntMatrix(2, 2, [[2, 4], [6, 8]])
        d, u, v = smith_normal_form(m)
        assert u * m * v == d
        assert [d.data[0][0], d.data[1][1]] == [2, 4]

    def test_identity(self):
        for n in (1, 2, 5):
            d, u, v = smith_normal_form(IntMatrix.identity(n))
            assert d == IntMatrix.identity(n)

    def test_randomized_decomposition(self):
        rng = random.Random(7)
        for _ in range(60):
            rows, cols = rng.randint(1, 8), rng.randint(1, 8)
            m = random_matrix(rng, rows, cols)
            d, u, v = smith_normal_form(m)
            assert u * m * v == d
            assert abs(det(u)) == 1
            assert abs(det(v)) == 1
            diag = [d.data[i][i] for i in range(min(rows, cols))]
            for i in range(rows):
                for j in range(cols):
                    if i != j:
                        assert d.data[i][j] == 0
            nz = [x for x in diag if x]
            assert all(x > 0 for x in nz)
            for a, b in zip(nz, nz[1:]):
                assert b % a == 0
            # zeros come after all nonzero invariants
            assert diag == nz + [0] * (len(diag) - len(nz))


class TestKernelAndContainment:
    def test_kernel_of_row(self):
        k = kernel_lattice(IntMatrix(1, 2, [[1, 1]]))
        assert k.cols == 1
        assert sorted(k.column(0)) == [-1, 1]

    def test_kernel_of_identity_empty(self):
        assert kernel_lattice(IntMatrix.identity(3)).cols == 0

    def test_kernel_of_zero_full(self):
        k = kernel_lattice(IntMatrix(1, 2, [[0, 0]]))
        assert k.cols == 2
        assert abs(det(IntMatrix(2, 2, k.data))) == 1

    def test_randomized_kernel_annihilates(self):
        rng = random.Random(11)
        for _ in range(40):
            m = random_matrix(rng, rng.randint(1, 6), rng.randint(1, 6))
            k = kernel_lattice(m)
            assert (m * k).is_zero()
            assert rational_rank(k) == k.cols
            assert k.cols == m.cols - rational_rank(m)

    def test_containment_examples(self):
        k1 = IntMatrix.from_columns([[2, 0]])
        k2 = IntMatrix.from_columns([[1, 0]])
        assert lattice_contained(k1, k2)
        assert not lattice_contained(k2, k1)
        empty = IntMatrix(2, 0)
        assert lattice_contained(empty, k2)

    def test_containment_reflexive_transitive(self):
        rng = random.Random(13)
        for _ in range(30):
            n = rng.randint(1, 5)
            a = random_matrix(rng, n, rng.randint(0, 4), -4, 4)
            assert lattice_contained(a, a)
            # build contained chains: span(C*B) <= span(B) <= span(B|extra)
            b = random_matrix(rng, n, rng.randint(1, 4), -4, 4)
            c = random_matrix(rng, b.cols, rng.randint(1, 3), -3, 3)
            inner = b * c
            outer = b.hstack(random_matrix(rng, n, 1, -3, 3))
            assert lattice_contained(inner, b)
            if lattice_contained(b, outer):
                assert lattice_contained(inner, outer)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            lattice_contained(IntMatrix(2, 1, [[1], [0]]), IntMatrix(3, 1, [[1], [0], [0]]))

    def test_hermite_basis_spans_same_lattice(self):
        rng = random.Random(17)
        for _ in range(30):
            m = random_matrix(rng, rng.randint(1, 5), rng.randint(1, 5), -6, 6)
            basis = IntMatrix.from_columns(hermite_column_basis(m), rows=m.rows)
            assert lattice_contained(m, basis)
            assert lattice_contained(basis, m)


class TestSolveAndSaturate:
    def test_solve_roundtrip(self):
        rng = random.Random(19)
        for _ in range(40):
            m = random_matrix(rng, rng.randint(1, 5), rng.randint(1, 5), -5, 5)
            x = [rng.randint(-4, 4) for _ in range(m.cols)]
            v = m.apply(x)
            sol = solve_in_lattice(m, v)
            assert sol is not None
            assert m.apply(sol) == v

    def test_solve_detects_failure(self):
        m = IntMatrix(2, 1, [[2], [0]])
        assert solve_in_lattice(m, [1, 0]) is None
        assert solve_in_lattice(m, [0, 1]) is None

    def test_saturation(self):
        m = IntMatrix.from_columns([[2, 0], [0, 3]])
        s = saturate_lattice(m)
        assert lattice_contained(IntMatrix.identity(2), s)
        assert lattice_contained(s, IntMatrix.identity(2))

    def test_unimodular_inverse(self):
        rng = random.Random(23)
        for _ in range(20):
            m = random_matrix(rng, 4, 4, -5, 5)
            _, u, v = smith_normal_form(m)
            for t in (u, v):
                assert t * unimodular_inverse(t) == IntMatrix.identity(t.rows)


class TestHomology:
    def test_zero_differentials(self):
        d_in = IntMatrix(3, 0)
        d_out = IntMatrix(0, 3)
        assert homology_at(d_in, d_out) == HomologyGroup(3)

    def test_z_mod_2(self):
        d_in = IntMatrix(1, 1, [[2]])
        d_out = IntMatrix(0, 1)
        assert homology_at(d_in, d_out) == HomologyGroup(0, (2,))

    def test_surjective_inclusion_trivial(self):
        d_in = IntMatrix(1, 1, [[1]])
        d_out = IntMatrix(0, 1)
        assert homology_at(d_in, d_out) == HomologyGroup(0)

    def test_composition_checked(self):
        d_in = IntMatrix(1, 1, [[1]])
        d_out = IntMatrix(1, 1, [[1]])
        with pytest.raises(CompositionNonzero) as err:
            homology_at(d_in, d_out)
        assert err.value.value == 1

    def test_free_rank_matches_rational_ranks(self):
        rng = random.Random(29)
        for _ in range(40):
            n_mid = rng.randint(1, 5)
            d_out = random_matrix(rng, rng.randint(0, 4), n_mid, -4, 4)
            # choose d_in inside ker(d_out): combinations of the kernel basis
            k = kernel_lattice(d_out)
            combo = random_matrix(rng, k.cols, rng.randint(0, 3), -3, 3)
            d_in = k * combo
            h = homology_at(d_in, d_out)
            assert h.free_rank == n_mid - rational_rank(d_out) - rational_rank(d_in)

    def test_presentation_reduce_and_lift(self):
        # Z^2 / <(2,0)> = Z/2 + Z
        d_in = IntMatrix.from_columns([[2, 0]])
        d_out = IntMatrix(0, 2)
        pres = homology_presentation(d_in, d_out)
        assert pres.group == HomologyGroup(1, (2,))
        for i in range(pres.n_generators):
            vec = pres.lift(i)
            coords = pres.reduce(vec)
            expected = [0] * pres.n_generators
            expected[i] = 1
            assert coords == expected
        assert pres.is_zero([2, 0])
        assert not pres.is_zero([1, 0])

    def test_circle_segment_oracle(self):
        # cellular chain complex of an interval subdivided into 8 edges
        verts, edges = 9, 8
        d1 = IntMatrix(verts, edges)
        for e in range(edges):
            d1.data[e][e] -= 1
            d1.data[e + 1][e] += 1
        assert homology_at(d1, IntMatrix(0, verts)) == HomologyGroup(1)
        assert homology_at(IntMatrix(edges, 0), d1) == HomologyGroup(0)


class TestLatticeQuotient:
    def test_quotient_with_torsion(self):
        num = IntMatrix.from_columns([[1, 0], [0, 2]])
        den = IntMatrix.from_columns([[3, 0], [0, 4]])
        # Z + 2Z modulo <(3,0),(0,4)> = Z/3 + Z/2
        pres = lattice_quotient(num, den)
        assert pres.group == HomologyGroup(0, (6,))

    def test_rational_helpers(self):
        m = IntMatrix(2, 2, [[1, 2], [2, 4]])
        assert rational_rank(m) == 1
        assert rational_solvable(m, [1, 2])
        assert not rational_solvable(m, [1, 0])
