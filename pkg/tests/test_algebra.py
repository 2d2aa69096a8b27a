"""
Algebra Tests

Unit tests for modular arithmetic and linear algebra over Z_d.
"""

import sys
from itertools import product
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

# Add project root
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src.algebra.zd import (
    Prime, SymplecticVector, ZdMatrix, ZdVector,
    mod_inverse, nullspace, rank, row_reduce, solve_linear, symplectic_product,
)
from src.utils.errors import DimensionMismatch, InvalidModulus, NoSolution, ZeroInverse

PRIMES = [3, 5, 7, 11, 13, 97]


class TestPrime:
    """Test suite for the modulus type."""

    def test_accepts_odd_primes(self):
        """Test that odd primes in range are accepted."""
        for d in PRIMES:
            assert Prime(d) == d

    @pytest.mark.parametrize("bad", [1, 2, 4, 9, 15, 101, 0, -3])
    def test_rejects_others(self, bad):
        """Test that non-primes, 2 and out-of-range values are rejected."""
        with pytest.raises(InvalidModulus):
            Prime(bad)

    def test_rejects_bool(self):
        """Test that booleans are not taken as integers."""
        with pytest.raises(InvalidModulus):
            Prime(True)


class TestModInverse:
    """Test suite for mod_inverse."""

    def test_examples(self):
        """Test the worked examples."""
        assert mod_inverse(2, 3) == 2
        assert mod_inverse(1, 7) == 1
        assert mod_inverse(3, 7) == 5

    def test_zero_raises(self):
        """Test that zero has no inverse."""
        with pytest.raises(ZeroInverse):
            mod_inverse(0, 5)
        with pytest.raises(ZeroInverse):
            mod_inverse(10, 5)

    @given(st.sampled_from(PRIMES), st.integers(min_value=1, max_value=10 ** 6))
    def test_inverse_property(self, d, a):
        """Test a * a^-1 = 1 for every nonzero residue."""
        if a % d == 0:
            return
        assert (a * mod_inverse(a, d)) % d == 1

    def test_exhaustive_small_primes(self):
        """Test every residue of the small primes."""
        for d in [3, 5, 7, 11]:
            for a in range(1, d):
                assert a * mod_inverse(a, d) % d == 1


class TestRowReduce:
    """Test suite for row reduction."""

    def test_identity(self):
        """Test that the identity is already reduced."""
        result = row_reduce(ZdMatrix.identity(3, 3))
        assert result.rref == ZdMatrix.identity(3, 3)
        assert result.rank == 3
        assert result.pivot_columns == [0, 1, 2]

    def test_zero_matrix(self):
        """Test the zero matrix."""
        result = row_reduce(ZdMatrix.zeros(2, 4, 3))
        assert result.rank == 0
        assert result.pivot_columns == []
        assert result.rref == ZdMatrix.zeros(2, 4, 3)

    def test_rank_matches_span_enumeration(self, rng):
        """Test rank against the size of the enumerated row span."""
        for _ in range(20):
            m = rng.integers(0, 3, size=(3, 6))
            span = {tuple(np.dot(c, m) % 3) for c in product(range(3), repeat=3)}
            assert len(span) == 3 ** rank(ZdMatrix(m, 3))

    def test_idempotent(self, rng):
        """Test that reducing an RREF matrix changes nothing."""
        for d in [3, 5, 7]:
            m = ZdMatrix(rng.integers(0, d, size=(4, 7)), d)
            once = row_reduce(m).rref
            assert row_reduce(once).rref == once

    def test_pivots_are_unit(self, rng):
        """Test that pivot entries are 1 and their columns are cleared."""
        m = ZdMatrix(rng.integers(0, 5, size=(4, 6)), 5)
        result = row_reduce(m)
        for i, col in enumerate(result.pivot_columns):
            column = result.rref.entries[:, col]
            assert column[i] == 1
            assert np.count_nonzero(column) == 1


class TestSolveLinear:
    """Test suite for linear solves."""

    def test_identity(self):
        """Test that the identity returns the rhs."""
        s = ZdVector([2, 0, 1], 3)
        assert solve_linear(ZdMatrix.identity(3, 3), s) == s

    def test_inconsistent(self):
        """Test that an inconsistent system raises NoSolution."""
        with pytest.raises(NoSolution):
            solve_linear(ZdMatrix.zeros(2, 3, 3), ZdVector([1, 0], 3))

    def test_random_consistent_systems(self, rng):
        """Test substitution on random consistent systems over Z_5."""
        for _ in range(50):
            m = ZdMatrix(rng.integers(0, 5, size=(3, 5)), 5)
            s = m @ ZdVector(rng.integers(0, 5, size=5), 5)
            x = solve_linear(m, s)
            assert m @ x == s

    def test_length_mismatch(self):
        """Test that a wrong-length rhs is rejected."""
        with pytest.raises(DimensionMismatch):
            solve_linear(ZdMatrix.identity(3, 3), ZdVector([1, 2], 3))


class TestNullspace:
    """Test suite for nullspace bases."""

    def test_basis_is_annihilated(self, rng):
        """Test M x = 0 for every basis vector and the basis size."""
        for d in [3, 5]:
            m = ZdMatrix(rng.integers(0, d, size=(3, 6)), d)
            basis = nullspace(m)
            assert basis.shape[0] == 6 - rank(m)
            assert not ((m.entries @ basis.entries.T) % d).any()
            assert rank(basis) == basis.shape[0]


class TestSymplectic:
    """Test suite for the symplectic product."""

    def test_conjugate_pair(self):
        """Test that Z and X pair to 1."""
        z = SymplecticVector.from_flat([1, 0], 3)
        x = SymplecticVector.from_flat([0, 1], 3)
        assert symplectic_product(z, x) == 1

    def test_self_product(self):
        """Test that every label commutes with itself."""
        p = SymplecticVector.from_flat([1, 2, 0, 1], 3)
        assert symplectic_product(p, p) == 0

    def test_commuting_pair(self):
        """Test Z(x)Z against X^-1(x)X."""
        p = SymplecticVector.from_flat([1, 1, 0, 0], 3)
        q = SymplecticVector.from_flat([0, 0, 2, 1], 3)
        assert symplectic_product(p, q) == 0

    @settings(max_examples=50)
    @given(st.sampled_from([3, 5, 7]), st.lists(st.integers(0, 96), min_size=8, max_size=8))
    def test_antisymmetry(self, d, entries):
        """Test sp(p, q) = -sp(q, p) mod d."""
        p = SymplecticVector.from_flat(entries[:4], d)
        q = SymplecticVector.from_flat(entries[4:], d)
        assert (symplectic_product(p, q) + symplectic_product(q, p)) % d == 0

    def test_dimension_mismatch(self):
        """Test that labels of different length are rejected."""
        p = SymplecticVector.from_flat([1, 0], 3)
        q = SymplecticVector.from_flat([1, 0, 0, 0], 3)
        with pytest.raises(DimensionMismatch):
            symplectic_product(p, q)


@pytest.fixture
def rng():
    """Seeded generator for random matrices."""
    return np.random.default_rng(1234)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
