import random

import pytest

from tatesmith.errors import CompositionNonzero, ShapeMismatch
from tatesmith.linalg import (
    AbelianInvariants,
    FpQuotient,
    IntMatrix,
    fp_nullspace,
    fp_rank,
    fp_solve,
    quotient_presentation,
    snf,
    subquotient,
)


class TestIntMatrix:
    """Test the integer matrix value type"""

    def test_from_rows_and_shape(self):
        """Test building a matrix from rows"""
        M = IntMatrix.from_rows([[1, 2, 3], [4, 5, 6]])
        assert M.shape == (2, 3)
        assert M.entry(1, 2) == 6
        assert M.to_rows() == [[1, 2, 3], [4, 5, 6]]

    def test_ragged_rows_rejected(self):
        """Test that ragged rows raise ShapeMismatch"""
        with pytest.raises(ShapeMismatch):
            IntMatrix.from_rows([[1, 2], [3]])

    def test_matmul_and_identity(self):
        """Test multiplication against the identity"""
        M = IntMatrix.from_rows([[1, 2], [3, 4]])
        assert M @ IntMatrix.identity(2) == M
        assert IntMatrix.identity(2) @ M == M
        assert (M @ M).to_rows() == [[7, 10], [15, 22]]

    def test_matmul_shape_mismatch(self):
        """Test multiplying incompatible shapes"""
        with pytest.raises(ShapeMismatch):
            IntMatrix.identity(2) @ IntMatrix.identity(3)

    def test_from_columns(self):
        """Test building a matrix from columns"""
        M = IntMatrix.from_columns([[1, 2], [3, 4], [5, 6]], 2)
        assert M.to_rows() == [[1, 3, 5], [2, 4, 6]]

    def test_block_diag(self):
        """Test block diagonal assembly"""
        M = IntMatrix.block_diag([IntMatrix.scalar(1, 2), IntMatrix.scalar(2, 3)])
        assert M.to_rows() == [[2, 0, 0], [0, 3, 0], [0, 0, 3]]

    def test_kron(self):
        """Test the Kronecker product with the identity"""
        A = IntMatrix.from_rows([[0, 1], [1, 0]])
        K = IntMatrix.identity(2).kron(A)
        assert K.shape == (4, 4)
        assert K.entry(0, 1) == 1
        assert K.entry(2, 3) == 1
        assert K.entry(0, 3) == 0

    def test_power_and_mod(self):
        """Test matrix powers and reduction mod p"""
        A = IntMatrix.from_rows([[0, 1], [1, 0]])
        assert A.power(2) == IntMatrix.identity(2)
        assert IntMatrix.scalar(2, 3).mod(3).is_zero()

    def test_apply(self):
        """Test applying a matrix to a vector"""
        M = IntMatrix.from_rows([[1, 1], [0, 2]])
        assert M.apply([3, 4]) == [7, 8]


class TestSmithNormalForm:
    """Test the Smith normal form routine"""

    def test_identity(self):
        """Test SNF of the identity"""
        res = snf(IntMatrix.identity(2))
        assert res.D == IntMatrix.identity(2)
        assert res.rank == 2

    def test_zero(self):
        """Test SNF of a zero matrix"""
        res = snf(IntMatrix.zeros(2, 3))
        assert res.D.is_zero()
        assert res.rank == 0

    def test_diagonal_divisibility(self):
        """Test that diag(2, 3) normalises to diag(1, 6)"""
        res = snf(IntMatrix.from_rows([[2, 0], [0, 3]]))
        assert res.invariant_factors == [1, 6]

    def test_transforms_recover_diagonal(self):
        """Test U A V == D on seeded random matrices"""
        rng = random.Random(7)
        for _ in range(20):
            rows, cols = rng.randint(1, 4), rng.randint(1, 4)
            A = IntMatrix.from_rows([[rng.randint(-5, 5) for _ in range(cols)] for _ in range(rows)])
            res = snf(A)
            assert res.U @ A @ res.V == res.D
            assert res.U @ res.U_inv == IntMatrix.identity(rows)
            assert res.V @ res.V_inv == IntMatrix.identity(cols)
            factors = res.invariant_factors
            for a, b in zip(factors, factors[1:]):
                assert b % a == 0


class TestQuotients:
    """Test subquotient presentations"""

    def test_cyclic_of_order_p(self):
        """Test ker 0 / im p on Z is Z/p"""
        inv = subquotient(IntMatrix.scalar(1, 3), IntMatrix.zeros(0, 1), 3)
        assert inv.free_rank == 0
        assert inv.torsion == (3,)
        assert inv.has_p_torsion()

    def test_free_quotient(self):
        """Test zero maps on Z^2 give a free quotient"""
        inv = subquotient(IntMatrix.zeros(2, 0), IntMatrix.zeros(0, 2), 3)
        assert inv.free_rank == 2
        assert not inv.p_local_is_zero()

    def test_composition_must_vanish(self):
        """Test that d_out d_in != 0 is rejected"""
        with pytest.raises(CompositionNonzero):
            quotient_presentation(IntMatrix.identity(1), IntMatrix.identity(1))

    def test_coordinates_of_generator(self):
        """Test that the generator of Z/3 has coordinate 1"""
        pres = quotient_presentation(IntMatrix.scalar(1, 3), IntMatrix.zeros(0, 1), 3)
        assert pres.orders == [3]
        assert pres.coordinates(pres.generators[0]) == [1]
        assert pres.coordinates([3]) == [0]

    def test_prime_to_p_torsion_is_p_locally_zero(self):
        """Test that Z/2 vanishes after localising at 3"""
        inv = AbelianInvariants.from_factors(0, [2], 3)
        assert not inv.is_zero()
        assert inv.p_local_is_zero()
        assert str(inv) == "Z/2"


class TestFpLinearAlgebra:
    """Test linear algebra over F_p"""

    def test_fp_rank(self):
        """Test ranks over F_p"""
        assert fp_rank(IntMatrix.identity(3), 3) == 3
        assert fp_rank(IntMatrix.scalar(2, 2), 2) == 0
        assert fp_rank(IntMatrix.from_rows([[1, 1], [1, 1]]), 2) == 1

    def test_nullspace(self):
        """Test that nullspace vectors are killed"""
        A = IntMatrix.from_rows([[1, 1, 1]])
        basis = fp_nullspace(A, 3)
        assert len(basis) == 2
        for v in basis:
            assert A.apply(v)[0] % 3 == 0

    def test_solve(self):
        """Test solving a linear system mod p"""
        A = IntMatrix.from_rows([[1, 2], [0, 1]])
        x = fp_solve(A, [1, 1], 5)
        assert [(a % 5) for a in A.apply(x)] == [1, 1]
        assert fp_solve(IntMatrix.zeros(1, 1), [1], 5) is None

    def test_fp_quotient(self):
        """Test F_p cohomology of a two-term complex"""
        Q = FpQuotient(IntMatrix.zeros(2, 0), IntMatrix.from_rows([[1, 1]]), 3)
        assert Q.dim == 1
        assert len(Q.coordinates(Q.representatives[0])) == 1
