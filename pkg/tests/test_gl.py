from itertools import product

import pytest

from glstab.errors import ActionClosureError, NotAUnit
from glstab.exact import HomologyResult
from glstab.gl import (
    Group,
    abelian_invariants,
    abelianization,
    act_on_columns,
    affine_group,
    diagonal_d,
    embed_gl,
    enumerate_group,
    gl_order,
    h1_induced,
    h1_of_group,
    is_affine,
    mat_det,
    mat_identity,
    mat_inv,
    mat_mul,
    orbit_decompose,
    stabilizer_of_e1,
)


def brute_force_gl(n, p):
    """Oracle: every n x n matrix with nonzero determinant."""
    els = []
    for flat in product(range(p), repeat=n * n):
        m = tuple(flat[i * n:(i + 1) * n] for i in range(n))
        if mat_det(m, p):
            els.append(m)
    return els


class TestEnumeration:
    def test_gl1_f3(self):
        g = enumerate_group(1, 3)
        assert g.order == 2

    @pytest.mark.parametrize("n,p", [(2, 2), (2, 3)])
    def test_matches_brute_force(self, n, p):
        g = enumerate_group(n, p)
        oracle = brute_force_gl(n, p)
        assert g.order == len(oracle) == gl_order(n, p)
        assert set(g.elements) == set(oracle)

    def test_gl2_f2_order(self):
        assert enumerate_group(2, 2).order == 6  # (4-1)(4-2)

    def test_gl2_f3_order(self):
        assert enumerate_group(2, 3).order == 48  # (9-1)(9-3)

    def test_group_ops(self):
        g = enumerate_group(2, 3)
        for a in g.elements[:8]:
            assert g.mult(a, g.inv(a)) == g.identity
        assert mat_inv(mat_identity(2), 3) == mat_identity(2)


class TestDiagonal:
    def test_identity(self):
        assert diagonal_d(1, 1, 2, 5) == mat_identity(2)

    def test_slot(self):
        assert diagonal_d(2, 2, 2, 3) == ((1, 0), (0, 2))

    def test_not_a_unit(self):
        with pytest.raises(NotAUnit):
            diagonal_d(1, 0, 2, 3)

    def test_diagonals_commute_f5(self):
        for a in range(1, 5):
            for b in range(1, 5):
                d1 = diagonal_d(1, a, 2, 5)
                d2 = diagonal_d(2, b, 2, 5)
                assert mat_mul(d1, d2, 5) == mat_mul(d2, d1, 5)


class TestOrbits:
    def test_nonzero_vectors_single_orbit(self):
        g = enumerate_group(2, 3)
        basis = [v for v in product(range(3), repeat=2) if any(v)]
        dec = orbit_decompose(basis, g, act=lambda m, v: tuple(
            sum(r * x for r, x in zip(row, v)) % 3 for row in m))
        assert len(dec.orbits) == 1
        assert dec.orbits[0].size == 8
        assert len(dec.orbits[0].stabilizer) == 6  # 48 / 8

    def test_orbit_stabilizer_identity(self):
        g = enumerate_group(2, 2)
        basis = [v for v in product(range(2), repeat=2) if any(v)]
        dec = orbit_decompose(basis, g, act=lambda m, v: tuple(
            sum(r * x for r, x in zip(row, v)) % 2 for row in m))
        for orbit in dec.orbits:
            assert orbit.size * len(orbit.stabilizer) == g.order

    def test_fixed_point_under_trivial_group(self):
        triv = Group(1, 3, [mat_identity(1)])
        dec = orbit_decompose(["x"], triv, act=lambda m, b: b)
        assert len(dec.orbits) == 1
        assert dec.orbits[0].stabilizer == [mat_identity(1)]

    def test_action_leaving_basis_raises(self):
        g = enumerate_group(2, 2)
        basis = [(1, 0)]  # not closed under GL_2(F_2)
        with pytest.raises(ActionClosureError):
            orbit_decompose(basis, g, act=lambda m, v: tuple(
                sum(r * x for r, x in zip(row, v)) % 2 for row in m))


class TestStabilizer:
    @pytest.mark.parametrize("n,p,order", [(2, 3, 6), (2, 2, 2), (3, 2, 24)])
    def test_stabilizer_orders(self, n, p, order):
        # orbit-stabilizer: |GL_n(F_p)| / (p^n - 1)
        stab = stabilizer_of_e1(n, p)
        assert stab.order == gl_order(n, p) // (p**n - 1) == order

    @pytest.mark.parametrize("n,p", [(2, 2), (2, 3), (3, 2)])
    def test_stabilizer_is_affine(self, n, p):
        stab = stabilizer_of_e1(n, p)
        assert is_affine(stab, 1, n - 1)

    def test_affine_group_shape(self):
        aff = affine_group(1, 1, 3)
        assert aff.order == 6
        for m in aff.elements:
            assert m[0][0] == 1 and m[1][0] == 0 and m[1][1] != 0


class TestConjugationRealizesTransposition:
    @pytest.mark.parametrize("n,k", [(2, 2), (3, 2), (3, 3)])
    def test_row_swap_swaps_columns_of_u(self, n, k):
        # u = (e_{n-k+1},...,e_n); swapping two adjacent rows of u swaps the
        # matching pair of columns, with no sign
        p = 3
        u = tuple(tuple(1 if i == n - k + j else 0 for i in range(n)) for j in range(k))
        for j in range(k - 1):
            a, b = n - k + j, n - k + j + 1
            h = tuple(tuple(1 if (r == c and r not in (a, b)) or (r, c) in ((a, b), (b, a))
                            else 0 for c in range(n)) for r in range(n))
            swapped = act_on_columns(h, u, p)
            expected = list(u)
            expected[j], expected[j + 1] = expected[j + 1], expected[j]
            assert swapped == tuple(expected)


class TestAbelianization:
    def test_cyclic(self):
        g = enumerate_group(1, 5)
        assert h1_of_group(g) == HomologyResult(0, (4,))

    def test_gl2_f3(self):
        # oracle value via commutator-subgroup brute force
        g = enumerate_group(2, 3)
        ab = abelianization(g)
        assert len(ab.commutator) == 24
        assert ab.structure == HomologyResult(0, (2,))

    def test_gl2_f2_is_s3(self):
        g = enumerate_group(2, 2)
        assert h1_of_group(g) == HomologyResult(0, (2,))

    def test_commutator_subgroup_brute_force_agreement(self):
        g = enumerate_group(2, 3)
        ab = abelianization(g)
        # oracle: closure of all |G|^2 commutators
        from glstab.gl import closure
        comms = {g.mult(g.mult(a, b), g.inv(g.mult(b, a)))
                 for a in g.elements for b in g.elements}
        assert closure(sorted(comms), 3) == set(ab.commutator)

    def test_abelian_invariants_klein_vs_cyclic(self):
        mult4 = lambda a, b: (a + b) % 4
        assert abelian_invariants(list(range(4)), mult4, 0) == HomologyResult(0, (4,))
        multk = lambda a, b: (a[0] ^ b[0], a[1] ^ b[1])
        klein = [(0, 0), (0, 1), (1, 0), (1, 1)]
        assert abelian_invariants(klein, multk, (0, 0)) == HomologyResult(0, (2, 2))

    def test_h1_induced_det_iso(self):
        # GL_1(F_5) -> GL_2(F_5) hits all of H_1 via the determinant
        sub = enumerate_group(1, 5)
        amb = enumerate_group(2, 5)
        ind = h1_induced(sub, amb, embed=lambda m: embed_gl(m, 2))
        assert ind.source == HomologyResult(0, (4,))
        assert ind.target == HomologyResult(0, (4,))
        assert ind.kernel.is_trivial()
        assert ind.cokernel.is_trivial()
