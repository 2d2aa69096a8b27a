"""
Dense Density-Matrix Oracle

Independent simulation of a stabilizer reduction with explicit matrices,
used to check the phase-space engines on small codes:
project rho^(x)N onto the codespace, then recover the logical qudit by
tomography against the logical Weyl operators.
"""

import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Tuple, Union

import numpy as np

sys.path.insert(0, str(Path(__file__).parent.parent.parent))
from config import ORACLE_CONFIG
from src.algebra.zd import Prime
from src.codes.stabilizer import StabilizerCode, canonicalize, logical_operators
from src.phase_space.wigner import omega, pauli_matrix, weyl_operator
from src.utils.errors import BudgetExceeded, ShapeError, ZeroAcceptance
from src.utils.logger import get_logger

logger = get_logger()


@dataclass(frozen=True, eq=False)
class DenseState:
    """
    Hermitian unit-trace matrix on N qudits.

    Quasi-states (negative eigenvalues beyond -1e-10) are allowed and
    flagged through is_quasi.
    """
    matrix: np.ndarray
    d: Prime
    n_qudits: int = 1

    def __post_init__(self):
        d = Prime(self.d)
        object.__setattr__(self, "d", d)
        matrix = np.array(self.matrix, dtype=complex)
        dim = d ** self.n_qudits
        if matrix.shape != (dim, dim):
            raise ShapeError(f"expected a {dim}x{dim} matrix, got {matrix.shape}")
        if np.abs(matrix - matrix.conj().T).max() > ORACLE_CONFIG["hermitian_tol"]:
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(matrix) - 1.0) > ORACLE_CONFIG["trace_tol"]:
            raise ValueError(f"density matrix has trace {np.trace(matrix)!r}")
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)

    @classmethod
    def maximally_mixed(cls, d: int, n_qudits: int = 1) -> "DenseState":
        dim = int(d) ** n_qudits
        return cls(np.eye(dim) / dim, d, n_qudits)

    @property
    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.matrix).min())

    @property
    def is_quasi(self) -> bool:
        return self.min_eigenvalue < ORACLE_CONFIG["psd_tol"]


def random_density_matrix(d: int, seed=None, n_qudits: int = 1) -> DenseState:
    """Ginibre-distributed full-rank state."""
    rng = np.random.default_rng(seed)
    dim = int(d) ** n_qudits
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = g @ g.conj().T
    rho = (rho + rho.conj().T) / 2
    return DenseState(rho / np.trace(rho).real, d, n_qudits)


def _check_budget(code: StabilizerCode) -> None:
    dim = int(code.d) ** code.n_qudits
    if dim > ORACLE_CONFIG["max_dimension"]:
        raise BudgetExceeded(f"d^N = {dim} exceeds dense budget {ORACLE_CONFIG['max_dimension']}")


def codespace_projector(code: StabilizerCode) -> np.ndarray:
    """
    Projector onto the joint eigenspace with eigenvalues w^{s_i}.

    Pi = prod_i (1/d) sum_k w^{-s_i k} T(g_i)^k

    Raises:
        BudgetExceeded: if d^N exceeds the dense budget
    """
    _check_budget(code)
    d, N = int(code.d), code.n_qudits
    w = omega(d)
    projector = np.eye(d ** N, dtype=complex)
    for g, s in zip(code.generators(), code.syndrome):
        t = weyl_operator(d, g.a, g.b)
        term = np.zeros_like(projector)
        power = np.eye(d ** N, dtype=complex)
        for k in range(d):
            term += w ** (-s * k % d) * power
            power = power @ t
        projector = projector @ (term / d)
    return projector


def logical_operator_matrices(code: StabilizerCode) -> Tuple[np.ndarray, np.ndarray]:
    """Weyl matrices of the logical Z and X."""
    pair = logical_operators(canonicalize(code))
    d = int(code.d)
    return (weyl_operator(d, pair.Z_L.a, pair.Z_L.b),
            weyl_operator(d, pair.X_L.a, pair.X_L.b))


def distill_dense(code: StabilizerCode,
                  rho_in: Union[DenseState, np.ndarray]) -> Tuple[DenseState, float]:
    """
    Project rho^(x)N onto the codespace and decode the logical qudit.

    Returns:
        (decoded single-qudit state, acceptance probability)

    Raises:
        BudgetExceeded: if d^N exceeds the dense budget
        ZeroAcceptance: if the projection has weight below 1e-12
    """
    started = time.perf_counter()
    d, N = int(code.d), code.n_qudits
    rho = rho_in.matrix if isinstance(rho_in, DenseState) else np.asarray(rho_in, dtype=complex)
    if rho.shape != (d, d):
        raise ShapeError(f"input must be a single {d}x{d} qudit state, got {rho.shape}")

    projector = codespace_projector(code)
    rho_n = rho
    for _ in range(N - 1):
        rho_n = np.kron(rho_n, rho)

    projected = projector @ rho_n @ projector
    p = float(np.trace(projected).real)
    if p <= ORACLE_CONFIG["zero_acceptance_tol"]:
        raise ZeroAcceptance(f"acceptance probability {p!r}")

    z_l, x_l = logical_operator_matrices(code)
    rho_out = np.zeros((d, d), dtype=complex)
    z_power = np.eye(d ** N, dtype=complex)
    for a in range(d):
        x_power = np.eye(d ** N, dtype=complex)
        for b in range(d):
            logical = z_power @ x_power
            coefficient = np.trace(projected @ logical.conj().T) / p
            rho_out += coefficient * pauli_matrix(d, a, b)
            x_power = x_power @ x_l
        z_power = z_power @ z_l
    rho_out /= d
    rho_out = (rho_out + rho_out.conj().T) / 2

    state = DenseState(rho_out, d, 1)
    if state.is_quasi:
        logger.warning(f"dense oracle produced a quasi-state (min eigenvalue {state.min_eigenvalue:.3e})")
    logger.log_distillation("dense", d, N, p, time.perf_counter() - started)
    return state, p
