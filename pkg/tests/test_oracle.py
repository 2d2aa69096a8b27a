"""
Dense Oracle Tests

Cross-checks the phase-space engine against explicit density-matrix
projection and decoding.
"""

import sys
from pathlib import Path

import numpy as np
import pytest

# Add project root
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src.codes.stabilizer import StabilizerCode, random_code
from src.distillation.engine import distill_exact
from src.oracle.dense import (
    DenseState, codespace_projector, distill_dense, random_density_matrix,
)
from src.phase_space.wigner import wigner_from_density
from src.utils.errors import BudgetExceeded, ShapeError


class TestDenseState:
    """Test suite for the dense state container."""

    def test_maximally_mixed(self):
        """Test I/d."""
        state = DenseState.maximally_mixed(3)
        assert np.allclose(state.matrix, np.eye(3) / 3)
        assert not state.is_quasi

    def test_rejects_non_hermitian(self):
        """Test the Hermiticity check."""
        m = np.eye(3) / 3
        m = m.astype(complex)
        m[0, 1] = 0.1
        with pytest.raises(ValueError):
            DenseState(m, 3)

    def test_rejects_bad_trace(self):
        """Test the trace check."""
        with pytest.raises(ValueError):
            DenseState(np.eye(3), 3)

    def test_quasi_state_flagged(self):
        """Test that a negative eigenvalue is reported."""
        state = DenseState(np.diag([1.2, 0.0, -0.2]), 3)
        assert state.is_quasi
        assert state.min_eigenvalue == pytest.approx(-0.2)

    def test_random_state(self):
        """Test that random states are positive with unit trace."""
        state = random_density_matrix(5, seed=0)
        assert state.min_eigenvalue > 0
        assert np.trace(state.matrix).real == pytest.approx(1.0)


class TestProjector:
    """Test suite for codespace projectors."""

    def test_trivial_code(self, z_identity):
        """Test that Z(x)I projects onto |0> (x) 1."""
        expected = np.kron(np.diag([1, 0, 0]), np.eye(3))
        assert np.allclose(codespace_projector(z_identity), expected, atol=1e-12)

    def test_zz_code(self):
        """Test that Z(x)Z keeps |00>, |12> and |21>."""
        projector = codespace_projector(StabilizerCode.from_rows([[1, 1, 0, 0]], 3))
        expected = np.zeros(9)
        expected[[0, 5, 7]] = 1
        assert np.allclose(projector, np.diag(expected), atol=1e-12)

    @pytest.mark.parametrize("d,n", [(3, 2), (3, 3), (5, 2)])
    def test_random_codes(self, d, n):
        """Test idempotence, Hermiticity and rank d."""
        for seed in range(5):
            projector = codespace_projector(random_code(d, n, seed=seed))
            assert np.allclose(projector @ projector, projector, atol=1e-10)
            assert np.allclose(projector, projector.conj().T, atol=1e-10)
            assert np.trace(projector).real == pytest.approx(d)

    def test_budget(self):
        """Test that d^N above the budget is refused."""
        with pytest.raises(BudgetExceeded):
            codespace_projector(random_code(3, 6, seed=0))


class TestDistillDense:
    """Test suite for the dense oracle."""

    def test_trivial_code(self, z_identity):
        """Test that the trivial code returns its input."""
        rho = random_density_matrix(3, seed=1)
        out, p = distill_dense(z_identity, rho)
        assert np.allclose(out.matrix, rho.matrix, atol=1e-10)
        assert p == pytest.approx(rho.matrix[0, 0].real)

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_maximally_mixed(self, n):
        """Test I/d -> I/d with acceptance d^(1-N)."""
        out, p = distill_dense(random_code(3, n, seed=n), DenseState.maximally_mixed(3))
        assert np.allclose(out.matrix, np.eye(3) / 3, atol=1e-10)
        assert p == pytest.approx(3.0 ** (1 - n))

    def test_output_is_state(self):
        """Test Hermitian unit-trace output for positive input."""
        out, _ = distill_dense(random_code(5, 3, seed=2), random_density_matrix(5, seed=2))
        assert np.allclose(out.matrix, out.matrix.conj().T)
        assert np.trace(out.matrix).real == pytest.approx(1.0)
        assert not out.is_quasi

    def test_shape_check(self, z_identity):
        """Test that a two-qudit input is rejected."""
        with pytest.raises(ShapeError):
            distill_dense(z_identity, np.eye(9) / 9)

    @pytest.mark.parametrize("d,n", [(3, 2), (3, 3), (5, 2)])
    def test_agrees_with_phase_space(self, d, n):
        """Test the dense and exact engines on random codes and states."""
        for seed in range(50):
            code = random_code(d, n, seed=[seed, n])
            rho = random_density_matrix(d, seed=seed)
            out, p = distill_dense(code, rho)
            res = distill_exact(code, wigner_from_density(rho.matrix))
            assert np.abs(wigner_from_density(out.matrix).values - res.w_out.values).max() <= 1e-9
            assert p == pytest.approx(res.acceptance_probability, abs=1e-9)

    @pytest.mark.slow
    def test_agrees_on_five_qudits(self):
        """Test the largest dense case at d=3."""
        for seed in range(5):
            code = random_code(3, 5, seed=seed)
            rho = random_density_matrix(3, seed=seed)
            out, p = distill_dense(code, rho)
            res = distill_exact(code, wigner_from_density(rho.matrix))
            assert np.allclose(wigner_from_density(out.matrix).values, res.w_out.values, atol=1e-9)


@pytest.fixture
def z_identity():
    """Trivial Z(x)I code at d=3."""
    return StabilizerCode.from_rows([[1, 0, 0, 0]], 3)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
