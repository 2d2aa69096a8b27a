"""
Qudit Stabilizer Codes

N-to-1 stabilizer codes over Z_d, stored as an (N-1) x 2N generator matrix
M = (alpha | beta) plus a syndrome s (stabilizer i has eigenvalue w^{s_i}).

Provides:
- Validation (commutation and independence of the generators)
- Reduction to canonical block form by qudit exchange and row operations
- Logical Z/X operators of the encoded qudit
- Trivial-code classification
- Seeded random code generation
- JSON load/save and stable digests for deduplication
"""

import hashlib
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

sys.path.insert(0, str(Path(__file__).parent.parent.parent))
from src.algebra.zd import (
    Prime, SymplecticVector, ZdMatrix, ZdVector,
    gauss_jordan, nullspace, rank, symplectic_form,
)
from src.utils.errors import InvalidCode, ShapeError

SeedLike = Union[int, Sequence[int], None]


@dataclass(frozen=True, eq=False)
class StabilizerCode:
    """Generator matrix and syndrome of an N-to-1 qudit code."""
    d: Prime
    n_qudits: int
    matrix: ZdMatrix
    syndrome: ZdVector

    def __post_init__(self):
        d = Prime(self.d)
        object.__setattr__(self, "d", d)
        if int(self.n_qudits) < 2:
            raise InvalidCode(f"N must be at least 2, got {self.n_qudits}")
        object.__setattr__(self, "n_qudits", int(self.n_qudits))
        matrix = self.matrix if isinstance(self.matrix, ZdMatrix) else ZdMatrix(self.matrix, d)
        syndrome = self.syndrome if isinstance(self.syndrome, ZdVector) else ZdVector(self.syndrome, d)
        if matrix.d != d or syndrome.d != d:
            raise ShapeError("matrix and syndrome must use the code's modulus")
        if matrix.shape[1] != 2 * self.n_qudits:
            raise ShapeError(f"generator matrix needs {2 * self.n_qudits} columns, got {matrix.shape[1]}")
        if len(syndrome) != matrix.shape[0]:
            raise ShapeError(f"syndrome length {len(syndrome)} != {matrix.shape[0]} generators")
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "syndrome", syndrome)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], d: int,
                  syndrome: Optional[Sequence[int]] = None) -> "StabilizerCode":
        """Build a code from flat (a_1..a_N, b_1..b_N) rows."""
        arr = np.asarray(rows, dtype=np.int64)
        if arr.ndim != 2 or arr.shape[1] % 2:
            raise ShapeError(f"rows must form a k x 2N array, got shape {arr.shape}")
        if syndrome is None:
            syndrome = np.zeros(arr.shape[0], dtype=np.int64)
        return cls(Prime(d), arr.shape[1] // 2, ZdMatrix(arr, d), ZdVector(syndrome, d))

    @property
    def alpha(self) -> np.ndarray:
        return self.matrix.entries[:, :self.n_qudits]

    @property
    def beta(self) -> np.ndarray:
        return self.matrix.entries[:, self.n_qudits:]

    def generators(self) -> List[SymplecticVector]:
        return [SymplecticVector.from_flat(row, self.d) for row in self.matrix.entries]

    def __eq__(self, other) -> bool:
        return (isinstance(other, StabilizerCode) and self.d == other.d
                and self.matrix == other.matrix and self.syndrome == other.syndrome)

    def __hash__(self) -> int:
        return hash((self.matrix, self.syndrome))


@dataclass(frozen=True)
class CodeVerdict:
    """Outcome of validate(); falsy when the code is invalid."""
    valid: bool
    reason: Optional[str] = None
    pair: Optional[Tuple[int, int]] = None

    def __bool__(self) -> bool:
        return self.valid


def validate(code: StabilizerCode) -> CodeVerdict:
    """
    Check that the generators commute pairwise, are independent and number N-1.

    Returns:
        CodeVerdict naming the first non-commuting pair (i, j), i < j,
        or the rank defect, or a wrong generator count
    """
    rows = code.matrix.entries
    products = symplectic_form(rows, rows, code.n_qudits, code.d)
    for i in range(rows.shape[0]):
        for j in range(i + 1, rows.shape[0]):
            if products[i, j]:
                return CodeVerdict(False, f"generators {i} and {j} do not commute "
                                          f"(symplectic product {int(products[i, j])})", (i, j))

    r = rank(code.matrix)
    if r < rows.shape[0]:
        return CodeVerdict(False, f"rank defect: {rows.shape[0]} generators span rank {r}")
    if rows.shape[0] != code.n_qudits - 1:
        return CodeVerdict(False, f"expected {code.n_qudits - 1} generators for N={code.n_qudits}, "
                                  f"got {rows.shape[0]}")
    return CodeVerdict(True)


@dataclass(frozen=True, eq=False)
class CanonicalCode:
    """
    Canonical block form of a code.

    In canonical qudit order the generator rows read

        top n rows:     alpha = (1_n  A  vecA)   beta = (B  0    vecB)
        bottom m rows:  alpha = (0    0  0   )   beta = (C  1_m  vecC)

    with n = rank(alpha), m = N - 1 - n. permutation[j] is the physical
    qudit sitting at canonical column j; syndrome is carried through the
    same row operations.
    """
    d: Prime
    n_qudits: int
    n: int
    m: int
    A: ZdMatrix
    B: ZdMatrix
    C: ZdMatrix
    vecA: ZdVector
    vecB: ZdVector
    vecC: ZdVector
    permutation: Tuple[int, ...]
    syndrome: ZdVector

    def canonical_matrix(self) -> ZdMatrix:
        """Generator matrix in canonical qudit order."""
        n, m, N = self.n, self.m, self.n_qudits
        out = np.zeros((N - 1, 2 * N), dtype=np.int64)
        out[:n, :n] = np.eye(n, dtype=np.int64)
        out[:n, n:n + m] = self.A.entries
        out[:n, N - 1] = self.vecA.entries
        out[:n, N:N + n] = self.B.entries
        out[:n, 2 * N - 1] = self.vecB.entries
        out[n:, N:N + n] = self.C.entries
        out[n:, N + n:N + n + m] = np.eye(m, dtype=np.int64)
        out[n:, 2 * N - 1] = self.vecC.entries
        return ZdMatrix(out, self.d)

    def physical_matrix(self) -> ZdMatrix:
        """Canonical rows with columns returned to physical qudit order."""
        return ZdMatrix(unpermute_columns(self.canonical_matrix().entries, self.permutation), self.d)

    def to_code(self) -> StabilizerCode:
        """Equivalent StabilizerCode (same codespace) in physical order."""
        return StabilizerCode(self.d, self.n_qudits, self.physical_matrix(), self.syndrome)

    def key(self) -> tuple:
        """Deduplication key: canonical blocks plus carried syndrome."""
        return (int(self.d), self.n_qudits, self.n, self.m,
                tuple(map(tuple, self.A.tolist())), tuple(map(tuple, self.B.tolist())),
                tuple(map(tuple, self.C.tolist())), tuple(self.vecA.tolist()),
                tuple(self.vecB.tolist()), tuple(self.vecC.tolist()), tuple(self.syndrome.tolist()))

    def digest(self) -> str:
        return hashlib.sha256(json.dumps(self.key()).encode()).hexdigest()[:16]

    def to_dict(self) -> dict:
        return {
            "d": int(self.d), "N": self.n_qudits, "n": self.n, "m": self.m,
            "A": self.A.tolist(), "B": self.B.tolist(), "C": self.C.tolist(),
            "vecA": self.vecA.tolist(), "vecB": self.vecB.tolist(), "vecC": self.vecC.tolist(),
            "permutation": list(self.permutation), "syndrome": self.syndrome.tolist(),
            "trivial": is_trivial(self),
        }


def permute_columns(rows: np.ndarray, permutation: Sequence[int]) -> np.ndarray:
    """Reorder alpha and beta columns so canonical column j holds qudit permutation[j]."""
    n_qudits = len(permutation)
    perm = np.asarray(permutation, dtype=np.int64)
    return np.hstack([rows[:, perm], rows[:, n_qudits + perm]])


def unpermute_columns(rows: np.ndarray, permutation: Sequence[int]) -> np.ndarray:
    n_qudits = len(permutation)
    perm = np.asarray(permutation, dtype=np.int64)
    out = np.empty_like(rows)
    out[:, perm] = rows[:, :n_qudits]
    out[:, n_qudits + perm] = rows[:, n_qudits:]
    return out


def canonicalize(code: StabilizerCode) -> CanonicalCode:
    """
    Reduce a valid code to canonical block form.

    Qudits carrying alpha pivots move to the front in ascending order, then
    the qudits carrying pivots of the remaining pure-beta rows, then the
    single leftover qudit. Row scaling and addition act on the syndrome as
    an augmented column.

    Raises:
        InvalidCode: if validate(code) fails
    """
    verdict = validate(code)
    if not verdict:
        raise InvalidCode(verdict.reason)

    d, N = int(code.d), code.n_qudits
    augmented = np.hstack([code.matrix.entries, code.syndrome.entries.reshape(-1, 1)])

    # pivot qudits of alpha, then of the pure-beta rows left below them
    reduced, alpha_pivots = gauss_jordan(augmented, d, columns=range(N))
    n = len(alpha_pivots)
    rest = [q for q in range(N) if q not in alpha_pivots]
    _, beta_pivots = gauss_jordan(reduced[n:], d, columns=[N + q for q in rest])
    beta_qudits = [c - N for c in beta_pivots]
    m = len(beta_qudits)
    leftover = [q for q in rest if q not in beta_qudits]
    permutation = tuple(alpha_pivots + beta_qudits + leftover)

    permuted = np.hstack([permute_columns(augmented[:, :2 * N], permutation), augmented[:, 2 * N:]])
    order = list(range(N)) + list(range(N + n, N + n + m))
    canon, pivots = gauss_jordan(permuted, d, columns=order)
    if pivots != list(range(n)) + list(range(N + n, N + n + m)):
        raise InvalidCode(f"canonical pivots not reached: {pivots}")

    top, bottom = canon[:n], canon[n:N - 1]
    return CanonicalCode(
        d=code.d, n_qudits=N, n=n, m=m,
        A=ZdMatrix(top[:, n:n + m].reshape(n, m), d),
        B=ZdMatrix(top[:, N:N + n].reshape(n, n), d),
        C=ZdMatrix(bottom[:, N:N + n].reshape(m, n), d),
        vecA=ZdVector(top[:, N - 1], d),
        vecB=ZdVector(top[:, 2 * N - 1], d),
        vecC=ZdVector(bottom[:, 2 * N - 1], d),
        permutation=permutation,
        syndrome=ZdVector(canon[:, 2 * N], d),
    )


@dataclass(frozen=True)
class LogicalPair:
    """Logical Z and X of the encoded qudit, in physical qudit order."""
    Z_L: SymplecticVector
    X_L: SymplecticVector


def logical_operators(c: CanonicalCode) -> LogicalPair:
    """
    Logical operators read off the canonical blocks.

    In canonical order Z_L = (0, -vecC, 1 | vecB, 0, 0) and
    X_L = (0, 0, 0 | -vecA, 0, 1); both are mapped back through the
    column permutation.
    """
    d, N, n, m = int(c.d), c.n_qudits, c.n, c.m
    z_flat = np.zeros(2 * N, dtype=np.int64)
    z_flat[n:n + m] = -c.vecC.entries
    z_flat[N - 1] = 1
    z_flat[N:N + n] = c.vecB.entries

    x_flat = np.zeros(2 * N, dtype=np.int64)
    x_flat[N:N + n] = -c.vecA.entries
    x_flat[2 * N - 1] = 1

    z_phys, x_phys = unpermute_columns(np.vstack([z_flat, x_flat]), c.permutation)
    return LogicalPair(SymplecticVector.from_flat(z_phys, d), SymplecticVector.from_flat(x_phys, d))


def is_trivial(c: CanonicalCode) -> bool:
    """True iff vecA, vecB and vecC all vanish; the code then passes one qudit through."""
    return c.vecA.is_zero() and c.vecB.is_zero() and c.vecC.is_zero()


def random_code(d: int, N: int, seed: SeedLike = None, zero_syndrome: bool = False) -> StabilizerCode:
    """
    Draw a valid N-to-1 code.

    Each new generator is drawn uniformly from the commutant of the rows
    kept so far and rejected if it falls in their span. Deterministic for
    a fixed seed.

    Args:
        d: Odd prime
        N: Number of physical qudits (>= 2)
        seed: Seed for numpy's default_rng
        zero_syndrome: Use s = 0 instead of a uniformly random syndrome
    """
    d = Prime(d)
    if int(N) < 2:
        raise InvalidCode(f"N must be at least 2, got {N}")
    rng = np.random.default_rng(seed)
    kept = np.zeros((0, 2 * N), dtype=np.int64)

    while kept.shape[0] < N - 1:
        # (a|b) commutes with (a_g|b_g) iff -b_g.a + a_g.b = 0
        constraints = np.hstack([-kept[:, N:], kept[:, :N]]) % d
        if kept.shape[0]:
            basis = nullspace(ZdMatrix(constraints, d)).entries
        else:
            basis = np.eye(2 * N, dtype=np.int64)
        candidate = (rng.integers(0, d, size=basis.shape[0]) @ basis) % d
        trial = np.vstack([kept, candidate])
        if rank(ZdMatrix(trial, d)) == trial.shape[0]:
            kept = trial

    syndrome = np.zeros(N - 1, dtype=np.int64) if zero_syndrome else rng.integers(0, d, size=N - 1)
    return StabilizerCode(d, N, ZdMatrix(kept, d), ZdVector(syndrome, d))


def code_digest(code: StabilizerCode) -> str:
    """Short stable digest of the canonical form."""
    return canonicalize(code).digest()


def load_code(path: Union[str, Path]) -> StabilizerCode:
    """Read a code from its JSON file format."""
    from src.serialization.formats import CodeFile
    return CodeFile.load(path).to_code()


def save_code(code: StabilizerCode, path: Union[str, Path]) -> Path:
    """Write a code in its JSON file format."""
    from src.serialization.formats import CodeFile
    return CodeFile.from_code(code).save(path)
