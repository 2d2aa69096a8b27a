"""
Discrete Wigner Functions

Phase-space representation of qudit states for odd prime d.

Conventions:
- Pauli Z^a X^b with X|k> = |k+1>, Z|k> = w^k |k>, w = exp(2 pi i / d)
- Weyl operator T(a, b) = w^{-a b / 2} Z^a X^b (2 inverted mod d)
- Phase-point operators A_(0,0) = sum_{z,x} T(z, x), A_(u,v) = P A_(0,0) P^dagger
  with P = Z^u X^v; each has trace d and they sum to d^2 * identity
- W(p) = Tr(rho A_p) / d^(2N) for N qudits, A_p a tensor product
- Flat index z*d + x per qudit, qudit 1 most significant
"""

import sys
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np

sys.path.insert(0, str(Path(__file__).parent.parent.parent))
from config import ORACLE_CONFIG, WIGNER_CONFIG
from src.algebra.zd import Prime, mod_inverse
from src.utils.errors import BudgetExceeded, DimensionMismatch, ShapeError

Point = Tuple[int, int]


def omega(d: int) -> complex:
    return np.exp(2j * np.pi / int(d))


def pauli_matrix(d: int, a: int, b: int) -> np.ndarray:
    """Matrix of Z^a X^b."""
    d = int(d)
    k = np.arange(d)
    out = np.zeros((d, d), dtype=complex)
    out[(k + b) % d, k] = omega(d) ** ((a * (k + b)) % d)
    return out


def weyl_matrix(d: int, a: int, b: int) -> np.ndarray:
    """Matrix of T(a, b) = w^{-a b / 2} Z^a X^b."""
    phase = (-a * b * mod_inverse(2, d)) % int(d)
    return omega(d) ** phase * pauli_matrix(d, a, b)


def weyl_operator(d: int, a: Sequence[int], b: Sequence[int]) -> np.ndarray:
    """Tensor product of single-qudit Weyl operators over all qudits."""
    out = np.ones((1, 1), dtype=complex)
    for ai, bi in zip(a, b):
        out = np.kron(out, weyl_matrix(d, int(ai), int(bi)))
    return out


@dataclass(frozen=True, eq=False)
class PhasePointOperator:
    """A_(u,v) for a single qudit."""
    d: Prime
    point: Point
    matrix: np.ndarray


@lru_cache(maxsize=None)
def _phase_point_matrix(d: int, u: int, v: int) -> np.ndarray:
    if (u, v) == (0, 0):
        a00 = sum(weyl_matrix(d, z, x) for z in range(d) for x in range(d))
    else:
        a00 = _phase_point_matrix(d, 0, 0)
    p = pauli_matrix(d, u, v)
    out = p @ a00 @ p.conj().T
    out.setflags(write=False)
    return out


def phase_point_operator(d: int, u: int, v: int) -> PhasePointOperator:
    d = Prime(d)
    u, v = int(u) % d, int(v) % d
    return PhasePointOperator(d, (u, v), _phase_point_matrix(int(d), u, v))


@lru_cache(maxsize=None)
def phase_point_stack(d: int) -> np.ndarray:
    """All single-qudit phase-point operators, shape (d^2, d, d), index z*d + x."""
    out = np.stack([_phase_point_matrix(d, z, x) for z in range(d) for x in range(d)])
    out.setflags(write=False)
    return out


def flat_index(d: int, z: Sequence[int], x: Sequence[int]) -> int:
    """Flat Wigner index of the point (z, x)."""
    idx = 0
    for zi, xi in zip(z, x):
        idx = idx * d * d + (int(zi) % d) * d + (int(xi) % d)
    return idx


def point_of_index(d: int, n_qudits: int, index: int) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    digits = []
    for _ in range(n_qudits):
        index, p = divmod(index, d * d)
        digits.append(p)
    digits.reverse()
    return tuple(p // d for p in digits), tuple(p % d for p in digits)


@dataclass(frozen=True, eq=False)
class WignerFunction:
    """Quasi-distribution over the d^(2N) points of N-qudit phase space."""
    d: Prime
    n_qudits: int
    values: np.ndarray

    def __post_init__(self):
        d = Prime(self.d)
        object.__setattr__(self, "d", d)
        values = np.array(self.values, dtype=float).reshape(-1)
        if values.size != d ** (2 * self.n_qudits):
            raise ShapeError(f"{values.size} values for N={self.n_qudits}, d={d}; "
                             f"expected {d ** (2 * self.n_qudits)}")
        if not np.all(np.isfinite(values)):
            raise ValueError("Wigner values must be finite")
        if abs(values.sum() - 1.0) > WIGNER_CONFIG["construction_tol"]:
            raise ValueError(f"Wigner values sum to {values.sum()!r}, not 1")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def uniform(cls, d: int, n_qudits: int = 1) -> "WignerFunction":
        size = int(d) ** (2 * n_qudits)
        return cls(d, n_qudits, np.full(size, 1.0 / size))

    def grid(self) -> np.ndarray:
        """Values as an array of shape (d, d) * N, axes (z_1, x_1, z_2, x_2, ...)."""
        return self.values.reshape((int(self.d),) * (2 * self.n_qudits))

    def value_at(self, point: Point) -> float:
        """Single-qudit value W(z, x)."""
        if self.n_qudits != 1:
            raise DimensionMismatch("value_at takes a single-qudit point")
        z, x = point
        return float(self.values[(int(z) % self.d) * self.d + int(x) % self.d])

    def __eq__(self, other) -> bool:
        return (isinstance(other, WignerFunction) and self.d == other.d
                and self.n_qudits == other.n_qudits and np.array_equal(self.values, other.values))

    def __hash__(self) -> int:
        return hash((int(self.d), self.n_qudits, self.values.tobytes()))


def _infer_qudits(dim: int, n_qudits: Optional[int], d: Optional[int]) -> Tuple[int, int]:
    if d is not None:
        d = int(Prime(d))
        n = 0
        size = 1
        while size < dim:
            size *= d
            n += 1
        if size != dim or (n_qudits is not None and n != n_qudits):
            raise ShapeError(f"dimension {dim} is not d^N for d={d}")
        return d, n
    n_qudits = 1 if n_qudits is None else int(n_qudits)
    d = int(round(dim ** (1.0 / n_qudits)))
    if d ** n_qudits != dim:
        raise ShapeError(f"dimension {dim} is not a {n_qudits}-th power")
    return int(Prime(d)), n_qudits


def wigner_from_density(rho: np.ndarray, n_qudits: Optional[int] = None,
                        d: Optional[int] = None) -> WignerFunction:
    """
    Wigner function of a density matrix.

    Args:
        rho: d^N x d^N Hermitian, unit-trace matrix
        n_qudits: N (default 1, or inferred from d)
        d: local dimension (inferred from N when omitted)

    Raises:
        ShapeError: if rho is not square of size d^N
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ShapeError(f"density matrix must be square, got shape {rho.shape}")
    d, n = _infer_qudits(rho.shape[0], n_qudits, d)

    stack = phase_point_stack(d)
    rows, cols, points = list(range(n)), list(range(n, 2 * n)), list(range(2 * n, 3 * n))
    operands = [rho.reshape((d,) * (2 * n)), rows + cols]
    for i in range(n):
        operands += [stack, [points[i], cols[i], rows[i]]]
    values = np.einsum(*operands, points, optimize=True).real / d ** (2 * n)
    return WignerFunction(d, n, values.reshape(-1))


def density_from_wigner(w: WignerFunction) -> np.ndarray:
    """
    Inverse transform rho = d^-N sum_p W(p) A_p.

    Raises:
        BudgetExceeded: if d^N exceeds the dense-matrix budget
    """
    d, n = int(w.d), w.n_qudits
    if d ** n > ORACLE_CONFIG["max_dimension"]:
        raise BudgetExceeded(f"d^N = {d ** n} exceeds dense budget {ORACLE_CONFIG['max_dimension']}")
    stack = phase_point_stack(d)
    rows, cols, points = list(range(n)), list(range(n, 2 * n)), list(range(2 * n, 3 * n))
    operands = [w.values.reshape((d * d,) * n), points]
    for i in range(n):
        operands += [stack, [points[i], rows[i], cols[i]]]
    rho = np.einsum(*operands, rows + cols, optimize=True) / d ** n
    return rho.reshape(d ** n, d ** n)


def tensor(w1: WignerFunction, w2: WignerFunction) -> WignerFunction:
    """Product Wigner function of two independent registers."""
    if w1.d != w2.d:
        raise DimensionMismatch(f"cannot tensor d={w1.d} with d={w2.d}")
    return WignerFunction(w1.d, w1.n_qudits + w2.n_qudits, np.outer(w1.values, w2.values).reshape(-1))


def tensor_power(w: WignerFunction, n: int) -> WignerFunction:
    out = w
    for _ in range(n - 1):
        out = tensor(out, w)
    return out


def translate(w: WignerFunction, a: int, b: int) -> WignerFunction:
    """Shift a single-qudit Wigner function by (a, b); matches conjugation by Z^a X^b."""
    if w.n_qudits != 1:
        raise DimensionMismatch("translate takes a single-qudit Wigner function")
    return WignerFunction(w.d, 1, np.roll(w.grid(), (a, b), axis=(0, 1)).reshape(-1))


def negativity(w: WignerFunction) -> float:
    """Total weight of negative entries, as a positive number."""
    return float(-w.values[w.values < 0].sum())


class Membership(Enum):
    INSIDE = "inside"
    ON_BOUNDARY = "on_boundary"
    OUTSIDE = "outside"


@dataclass(frozen=True)
class PolytopeVerdict:
    status: Membership
    points: List[Point] = field(default_factory=list)


def polytope_membership(w: WignerFunction, tol: Optional[float] = None) -> PolytopeVerdict:
    """
    Locate a single-qudit state relative to the Wigner polytope.

    OUTSIDE lists the entries below -tol; otherwise ON_BOUNDARY lists the
    entries within tol of zero; otherwise INSIDE.
    """
    if w.n_qudits != 1:
        raise DimensionMismatch("polytope membership is defined for one qudit")
    tol = WIGNER_CONFIG["membership_tol"] if tol is None else tol
    d = int(w.d)
    negative = [divmod(int(i), d) for i in np.flatnonzero(w.values < -tol)]
    if negative:
        return PolytopeVerdict(Membership.OUTSIDE, negative)
    boundary = [divmod(int(i), d) for i in np.flatnonzero(np.abs(w.values) <= tol)]
    if boundary:
        return PolytopeVerdict(Membership.ON_BOUNDARY, boundary)
    return PolytopeVerdict(Membership.INSIDE)


@dataclass(frozen=True)
class NuFamilyState:
    """Single-qudit state with nu at one point and (1 - nu)/(d^2 - 1) elsewhere."""
    d: Prime
    nu: float
    point: Point

    def wigner(self) -> WignerFunction:
        return nu_family(self.d, self.nu, self.point)


def nu_family(d: int, nu: float, point: Point = (0, 0)) -> WignerFunction:
    d = int(Prime(d))
    values = np.full(d * d, (1.0 - nu) / (d * d - 1))
    values[(point[0] % d) * d + point[1] % d] = nu
    return WignerFunction(d, 1, values)


def to_nu_family(w: WignerFunction) -> NuFamilyState:
    """
    Twirl a single-qudit state into the nu family.

    The distinguished point is the smallest entry (lowest flat index on
    ties) and nu is its value.
    """
    if w.n_qudits != 1:
        raise DimensionMismatch("the nu family is defined for one qudit")
    d = int(w.d)
    idx = int(np.argmin(w.values))
    return NuFamilyState(w.d, float(w.values[idx]), divmod(idx, d))
