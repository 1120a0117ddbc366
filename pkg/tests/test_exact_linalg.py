"""Exact rational matrices, subspaces, characteristic polynomials, spectra."""

from __future__ import annotations

from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from helpers import rational_matrix
from kzmc import (
    InvarianceError,
    IrrationalSpectrumError,
    JointSpectrum,
    NotCommutingError,
    RationalMatrix,
    Subspace,
    char_poly,
    complete_basis,
    joint_spectrum,
    kernel_basis,
    matrix_rank,
    rational_roots,
    restriction,
)

rationals = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 3))
small_ints = st.integers(-4, 4)


def grids(rows, cols, elements=rationals):
    return st.lists(
        st.lists(elements, min_size=cols, max_size=cols),
        min_size=rows,
        max_size=rows,
    )


def square(size, elements=rationals):
    return grids(size, size, elements).map(rational_matrix)


class TestKernelAndCompletion:
    def test_identity_has_zero_kernel(self):
        assert kernel_basis(RationalMatrix.identity(3)).dim == 0

    def test_zero_matrix_has_full_kernel(self):
        space = kernel_basis(RationalMatrix.zero(3, 3))
        assert space.dim == 3
        assert space == Subspace.full(3)

    @given(grids(4, 2), grids(2, 4))
    def test_rank_two_factorization(self, left, right):
        b = rational_matrix(left)
        c = rational_matrix(right)
        assume(matrix_rank(b) == 2 and matrix_rank(c) == 2)
        a = b * c
        space = kernel_basis(a)
        assert space.dim == 2
        for vec in space.basis:
            assert all(x == 0 for x in a.apply(vec))

    @given(grids(3, 5))
    def test_rank_nullity(self, grid):
        a = rational_matrix(grid)
        assert matrix_rank(a) + kernel_basis(a).dim == a.cols

    def test_complete_basis_of_zero_subspace_is_identity(self):
        assert complete_basis(Subspace.zero(4)) == RationalMatrix.identity(4)

    def test_complete_basis_of_full_space_is_echelon_basis(self):
        assert complete_basis(Subspace.full(3)) == RationalMatrix.identity(3)

    @given(grids(2, 4))
    def test_complete_basis_invertible_and_leading(self, grid):
        space = Subspace.from_vectors(4, [[Fraction(x) for x in row] for row in grid])
        u = complete_basis(space)
        assert u.rows == u.cols == 4
        u.inverse()  # raises if singular
        grid = u.entries()
        for k, vec in enumerate(space.basis):
            assert tuple(row[k] for row in grid) == tuple(vec)


class TestRestriction:
    def test_restriction_to_full_space_is_change_of_basis(self):
        a = rational_matrix([[1, 2], [3, 4]])
        assert restriction(a, Subspace.full(2)) == a

    def test_restriction_of_diagonal_to_axis(self):
        a = rational_matrix([[1, 0], [0, 2]])
        axis = Subspace.from_vectors(2, [[Fraction(1), Fraction(0)]])
        assert restriction(a, axis) == rational_matrix([[1]])

    def test_block_triangular_leading_block(self):
        a = rational_matrix([[1, 2, 9], [3, 4, 9], [0, 0, 5]])
        lead = Subspace.from_vectors(
            3, [[Fraction(1), Fraction(0), Fraction(0)], [Fraction(0), Fraction(1), Fraction(0)]]
        )
        assert restriction(a, lead) == rational_matrix([[1, 2], [3, 4]])

    def test_non_invariant_subspace_rejected(self):
        a = rational_matrix([[0, 1], [1, 0]])
        axis = Subspace.from_vectors(2, [[Fraction(1), Fraction(0)]])
        with pytest.raises(InvarianceError):
            restriction(a, axis)


class TestCharPolyAndRoots:
    def test_char_poly_of_diag(self):
        # (x-1)(x-2) = 2 - 3x + x^2, ascending coefficients
        assert char_poly(rational_matrix([[1, 0], [0, 2]])) == (2, -3, 1)

    def test_rational_roots_with_multiplicity(self):
        # (x-3)^2 x = 9x - 6x^2 + x^3
        roots = rational_roots([0, 9, -6, 1])
        assert roots == Counter({Fraction(3): 2, Fraction(0): 1})

    @given(st.lists(st.integers(-5, 5), min_size=1, max_size=4))
    def test_companion_matrix_recovers_chosen_roots(self, chosen):
        # expand prod (x - r) into ascending coefficients
        coeffs = [Fraction(1)]
        for r in chosen:
            coeffs = [Fraction(0)] + coeffs
            coeffs = [c - r * coeffs[k + 1] for k, c in enumerate(coeffs[:-1])] + [
                coeffs[-1]
            ]
        size = len(chosen)
        comp = [[Fraction(0)] * size for _ in range(size)]
        for i in range(1, size):
            comp[i][i - 1] = Fraction(1)
        for i in range(size):
            comp[i][size - 1] = -coeffs[i]
        a = RationalMatrix(comp)
        assert char_poly(a) == tuple(coeffs)
        assert rational_roots(char_poly(a)) == Counter(
            {Fraction(r): chosen.count(r) for r in set(chosen)}
        )


class TestJointSpectrum:
    def test_two_diagonal_matrices(self):
        a = rational_matrix([[0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, -1]])
        b = rational_matrix([[1, 0, 0, 0], [0, 2, 0, 0], [0, 0, 2, 0], [0, 0, 0, 3]])
        expected = JointSpectrum(
            2,
            {
                (Fraction(0), Fraction(1)): 1,
                (Fraction(0), Fraction(2)): 2,
                (Fraction(-1), Fraction(3)): 1,
            },
        )
        assert joint_spectrum([a, b]) == expected

    def test_single_identity(self):
        spec = joint_spectrum([RationalMatrix.identity(3)])
        assert spec == JointSpectrum(1, {(Fraction(1),): 3})

    @given(
        st.lists(st.integers(-3, 3), min_size=3, max_size=3),
        st.lists(st.integers(-2, 2), min_size=3, max_size=3),
        st.lists(st.integers(-2, 2), min_size=3, max_size=3),
    )
    def test_single_matrix_matches_char_poly_roots(self, diag, upper, mix):
        # triangular with chosen diagonal, then a unipotent change of basis:
        # the spectrum is the diagonal multiset by construction
        tri = [[Fraction(0)] * 3 for _ in range(3)]
        tri[0][0], tri[1][1], tri[2][2] = (Fraction(x) for x in diag)
        tri[0][1], tri[0][2], tri[1][2] = (Fraction(x) for x in upper)
        u = rational_matrix(
            [[1, mix[0], mix[1]], [0, 1, mix[2]], [0, 0, 1]]
        )
        a = u.inverse() * RationalMatrix(tri) * u
        expected = JointSpectrum(1, Counter((Fraction(x),) for x in diag))
        assert joint_spectrum([a]) == expected
        roots = rational_roots(char_poly(a))
        assert roots == Counter({Fraction(x): diag.count(x) for x in set(diag)})

    @given(
        st.lists(st.integers(-3, 3), min_size=3, max_size=3),
        st.lists(st.integers(-3, 3), min_size=3, max_size=3),
    )
    def test_commuting_pair_from_common_eigenbasis(self, diag_a, diag_b):
        a = rational_matrix(
            [[diag_a[i] if i == j else 0 for j in range(3)] for i in range(3)]
        )
        b = rational_matrix(
            [[diag_b[i] if i == j else 0 for j in range(3)] for i in range(3)]
        )
        expected = JointSpectrum(
            2, Counter((Fraction(x), Fraction(y)) for x, y in zip(diag_a, diag_b))
        )
        assert joint_spectrum([a, b]) == expected
        # conjugation invariance with a unipotent change of basis
        u = rational_matrix([[1, 1, 0], [0, 1, 2], [0, 0, 1]])
        v = u.inverse()
        assert joint_spectrum([v * a * u, v * b * u]) == expected

    def test_subtraction_principle_on_block_triangular(self):
        # restriction spectrum + quotient spectrum = full spectrum
        a = rational_matrix([[1, 0, 5], [0, 1, 7], [0, 0, 2]])
        b = a * a  # commutes with a; eigenvalues square along with a's
        lead = Subspace.from_vectors(
            3,
            [[Fraction(1), Fraction(0), Fraction(0)], [Fraction(0), Fraction(1), Fraction(0)]],
        )
        full = joint_spectrum([a, b])
        part = joint_spectrum([restriction(a, lead), restriction(b, lead)])
        rest = full.subtract(part)
        assert part == JointSpectrum(2, {(Fraction(1), Fraction(1)): 2})
        assert rest == JointSpectrum(2, {(Fraction(2), Fraction(4)): 1})

    def test_non_commuting_rejected(self):
        a = rational_matrix([[0, 1], [0, 0]])
        b = rational_matrix([[1, 0], [0, 2]])
        with pytest.raises(NotCommutingError):
            joint_spectrum([a, b])

    def test_irrational_spectrum_is_an_error(self):
        rot = rational_matrix([[0, -1], [1, 0]])
        with pytest.raises(IrrationalSpectrumError):
            joint_spectrum([rot])

    def test_multiset_operations(self):
        one = JointSpectrum(1, {(Fraction(1),): 2, (Fraction(2),): 1})
        two = JointSpectrum(1, {(Fraction(1),): 1})
        assert one.union(two).multiplicity((Fraction(1),)) == 3
        assert one.subtract(two) == JointSpectrum(
            1, {(Fraction(1),): 1, (Fraction(2),): 1}
        )
        with pytest.raises(ValueError):
            two.subtract(one)
        assert one.scale_multiplicities(2).total == 6
        assert one.project([0]) == one

    def test_json_round_trip(self):
        spec = JointSpectrum(
            2, {(Fraction(1, 2), Fraction(-3)): 2, (Fraction(0), Fraction(5, 7)): 1}
        )
        assert JointSpectrum.from_json_obj(2, spec.to_json_obj()) == spec
