"""
Modular Arithmetic over Z_d

Exact scalars, vectors and matrices over the integers modulo an odd prime d:
- Gauss-Jordan row reduction with deterministic pivoting
- Linear solves and nullspaces
- Symplectic vectors labelling multi-qudit Pauli operators

All values are reduced to [0, d) on construction and stored in read-only
int64 arrays, so they can be shared between worker threads.
"""

import sys
from dataclasses import dataclass
from math import isqrt
from pathlib import Path
from typing import Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

sys.path.insert(0, str(Path(__file__).parent.parent.parent))
from config import ALGEBRA_CONFIG
from src.utils.errors import DimensionMismatch, InvalidModulus, NoSolution, ShapeError, ZeroInverse

ArrayLike = Union[Sequence, np.ndarray]


class Prime(int):
    """An odd prime modulus within the supported range."""

    def __new__(cls, d: int):
        if isinstance(d, Prime):
            return d
        if isinstance(d, bool) or not float(d).is_integer():
            raise InvalidModulus(f"modulus must be an integer, got {d!r}")
        d = int(d)
        if not ALGEBRA_CONFIG["min_prime"] <= d <= ALGEBRA_CONFIG["max_prime"]:
            raise InvalidModulus(
                f"modulus {d} outside [{ALGEBRA_CONFIG['min_prime']}, {ALGEBRA_CONFIG['max_prime']}]"
            )
        if d % 2 == 0 or any(d % q == 0 for q in range(3, isqrt(d) + 1, 2)):
            raise InvalidModulus(f"modulus {d} is not an odd prime")
        return super().__new__(cls, d)


def mod_inverse(a: int, d: int) -> int:
    """
    Multiplicative inverse of a modulo d by the extended Euclidean algorithm.

    Raises:
        ZeroInverse: if a is 0 mod d
    """
    a = int(a) % int(d)
    if a == 0:
        raise ZeroInverse(f"0 has no inverse modulo {d}")
    r0, r1 = int(d), a
    t0, t1 = 0, 1
    while r1:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    return t0 % int(d)


def _reduced(values: ArrayLike, d: int, ndim: int) -> np.ndarray:
    arr = np.asarray(values, dtype=np.int64)
    if ndim == 2 and arr.size == 0 and arr.ndim == 1:
        arr = arr.reshape(0, 0)
    if arr.ndim != ndim:
        raise ShapeError(f"expected a {ndim}-d array, got shape {arr.shape}")
    arr = np.mod(arr, d)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class ZdVector:
    """Vector over Z_d."""
    entries: np.ndarray
    d: Prime

    def __post_init__(self):
        object.__setattr__(self, "d", Prime(self.d))
        object.__setattr__(self, "entries", _reduced(self.entries, self.d, 1))

    @classmethod
    def zeros(cls, length: int, d: int) -> "ZdVector":
        return cls(np.zeros(length, dtype=np.int64), d)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[int]:
        return (int(v) for v in self.entries)

    def __getitem__(self, i):
        if isinstance(i, (int, np.integer)):
            return int(self.entries[i])
        return ZdVector(self.entries[i], self.d)

    def __eq__(self, other) -> bool:
        return (isinstance(other, ZdVector) and self.d == other.d
                and np.array_equal(self.entries, other.entries))

    def __hash__(self) -> int:
        return hash((int(self.d), self.entries.tobytes()))

    def _check(self, other: "ZdVector") -> None:
        if self.d != other.d or len(self) != len(other):
            raise DimensionMismatch(f"vectors of length {len(self)}/{len(other)} over Z_{self.d}/Z_{other.d}")

    def __add__(self, other: "ZdVector") -> "ZdVector":
        self._check(other)
        return ZdVector(self.entries + other.entries, self.d)

    def __sub__(self, other: "ZdVector") -> "ZdVector":
        self._check(other)
        return ZdVector(self.entries - other.entries, self.d)

    def __neg__(self) -> "ZdVector":
        return ZdVector(-self.entries, self.d)

    def __mul__(self, k: int) -> "ZdVector":
        return ZdVector(self.entries * int(k), self.d)

    __rmul__ = __mul__

    def dot(self, other: "ZdVector") -> int:
        self._check(other)
        return int(np.dot(self.entries, other.entries) % self.d)

    def is_zero(self) -> bool:
        return not self.entries.any()

    def tolist(self) -> List[int]:
        return [int(v) for v in self.entries]

    def __repr__(self) -> str:
        return f"ZdVector({self.tolist()}, d={int(self.d)})"


@dataclass(frozen=True, eq=False)
class ZdMatrix:
    """Matrix over Z_d."""
    entries: np.ndarray
    d: Prime

    def __post_init__(self):
        object.__setattr__(self, "d", Prime(self.d))
        object.__setattr__(self, "entries", _reduced(self.entries, self.d, 2))

    @classmethod
    def identity(cls, size: int, d: int) -> "ZdMatrix":
        return cls(np.eye(size, dtype=np.int64), d)

    @classmethod
    def zeros(cls, rows: int, cols: int, d: int) -> "ZdMatrix":
        return cls(np.zeros((rows, cols), dtype=np.int64), d)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.entries.shape

    @property
    def T(self) -> "ZdMatrix":
        return ZdMatrix(self.entries.T, self.d)

    def row(self, i: int) -> ZdVector:
        return ZdVector(self.entries[i], self.d)

    def rows(self) -> List[ZdVector]:
        return [self.row(i) for i in range(self.shape[0])]

    def __eq__(self, other) -> bool:
        return (isinstance(other, ZdMatrix) and self.d == other.d
                and np.array_equal(self.entries, other.entries))

    def __hash__(self) -> int:
        return hash((int(self.d), self.shape, self.entries.tobytes()))

    def __matmul__(self, other):
        if isinstance(other, ZdVector):
            if other.d != self.d or len(other) != self.shape[1]:
                raise DimensionMismatch(f"cannot apply {self.shape} matrix to length {len(other)} vector")
            return ZdVector(self.entries @ other.entries, self.d)
        if isinstance(other, ZdMatrix):
            if other.d != self.d or other.shape[0] != self.shape[1]:
                raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
            return ZdMatrix(self.entries @ other.entries, self.d)
        return NotImplemented

    def tolist(self) -> List[List[int]]:
        return self.entries.tolist()

    def __repr__(self) -> str:
        return f"ZdMatrix({self.tolist()}, d={int(self.d)})"


@dataclass(frozen=True)
class RowReduction:
    """Result of row_reduce."""
    rref: ZdMatrix
    rank: int
    pivot_columns: List[int]


def gauss_jordan(a: np.ndarray,
                 d: int,
                 columns: Optional[Sequence[int]] = None) -> Tuple[np.ndarray, List[int]]:
    """
    Gauss-Jordan elimination over Z_d on a copy of `a`.

    Pivots are taken in the given column order (left to right by default);
    the first row with a nonzero entry supplies each pivot, which is scaled
    to 1 and cleared from every other row. Columns not listed are carried
    along, which is how augmented right-hand sides ride through.

    Returns:
        (reduced array, pivot columns in the order found)
    """
    d = int(d)
    a = np.mod(np.array(a, dtype=np.int64), d)
    n_rows = a.shape[0]
    order = range(a.shape[1]) if columns is None else columns
    row = 0
    pivots: List[int] = []
    for col in order:
        if row >= n_rows:
            break
        nonzero = np.flatnonzero(a[row:, col])
        if nonzero.size == 0:
            continue
        pivot_row = row + int(nonzero[0])
        if pivot_row != row:
            a[[row, pivot_row]] = a[[pivot_row, row]]
        a[row] = (a[row] * mod_inverse(a[row, col], d)) % d
        factors = a[:, col].copy()
        factors[row] = 0
        a = (a - np.outer(factors, a[row])) % d
        pivots.append(int(col))
        row += 1
    return a, pivots


def row_reduce(M: ZdMatrix) -> RowReduction:
    """Reduced row-echelon form of M, its rank and pivot columns."""
    reduced, pivots = gauss_jordan(M.entries, M.d)
    return RowReduction(ZdMatrix(reduced, M.d), len(pivots), pivots)


def rank(M: ZdMatrix) -> int:
    """Rank of M over Z_d."""
    return len(gauss_jordan(M.entries, M.d)[1])


def solve_linear(M: ZdMatrix, s: ZdVector) -> ZdVector:
    """
    Particular solution x of M x = s (free variables set to zero).

    Raises:
        DimensionMismatch: if s does not have one entry per row of M
        NoSolution: if the system is inconsistent
    """
    rows, cols = M.shape
    if len(s) != rows or s.d != M.d:
        raise DimensionMismatch(f"rhs of length {len(s)} for a {rows}x{cols} system")
    augmented = np.hstack([M.entries, s.entries.reshape(-1, 1)])
    reduced, pivots = gauss_jordan(augmented, M.d, columns=range(cols))
    if reduced[len(pivots):, cols].any():
        raise NoSolution("inconsistent linear system over Z_%d" % M.d)
    x = np.zeros(cols, dtype=np.int64)
    for i, col in enumerate(pivots):
        x[col] = reduced[i, cols]
    return ZdVector(x, M.d)


def nullspace(M: ZdMatrix) -> ZdMatrix:
    """
    Basis of {x : M x = 0}, one basis vector per row.

    The basis has one vector per free column, with a 1 in that column.
    """
    rows, cols = M.shape
    reduced, pivots = gauss_jordan(M.entries, M.d)
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for i, col in enumerate(pivots):
            basis[k, col] = -reduced[i, f]
    return ZdMatrix(basis.reshape(len(free), cols), M.d)


@dataclass(frozen=True, eq=False)
class SymplecticVector:
    """
    Label (a|b) of the N-qudit Pauli Z^a X^b.

    As a phase-space point the same pair reads (z|x).
    """
    a: ZdVector
    b: ZdVector

    def __post_init__(self):
        if self.a.d != self.b.d or len(self.a) != len(self.b):
            raise DimensionMismatch("a and b halves must share length and modulus")

    @classmethod
    def from_flat(cls, flat: ArrayLike, d: int) -> "SymplecticVector":
        flat = np.asarray(flat, dtype=np.int64)
        if flat.ndim != 1 or flat.size % 2:
            raise ShapeError(f"flat symplectic vector must have even length, got shape {flat.shape}")
        n = flat.size // 2
        return cls(ZdVector(flat[:n], d), ZdVector(flat[n:], d))

    @property
    def n_qudits(self) -> int:
        return len(self.a)

    @property
    def d(self) -> Prime:
        return self.a.d

    def flat(self) -> np.ndarray:
        return np.concatenate([self.a.entries, self.b.entries])

    def __add__(self, other: "SymplecticVector") -> "SymplecticVector":
        return SymplecticVector(self.a + other.a, self.b + other.b)

    def __mul__(self, k: int) -> "SymplecticVector":
        return SymplecticVector(self.a * k, self.b * k)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, SymplecticVector) and self.a == other.a and self.b == other.b

    def __hash__(self) -> int:
        return hash((self.a, self.b))

    def __repr__(self) -> str:
        return f"SymplecticVector({self.a.tolist()} | {self.b.tolist()}, d={int(self.d)})"


def symplectic_product(p: SymplecticVector, q: SymplecticVector) -> int:
    """
    a.b' - b.a' mod d; zero iff the two Paulis commute.

    Raises:
        DimensionMismatch: if p and q differ in N or d
    """
    if p.d != q.d or p.n_qudits != q.n_qudits:
        raise DimensionMismatch(
            f"symplectic product of N={p.n_qudits}/d={p.d} and N={q.n_qudits}/d={q.d}"
        )
    return (p.a.dot(q.b) - p.b.dot(q.a)) % int(p.d)


def symplectic_form(rows: np.ndarray, other: np.ndarray, n_qudits: int, d: int) -> np.ndarray:
    """Pairwise symplectic products between flat (a|b) rows of two arrays."""
    a1, b1 = rows[:, :n_qudits], rows[:, n_qudits:]
    a2, b2 = other[:, :n_qudits], other[:, n_qudits:]
    return (a1 @ b2.T - b1 @ a2.T) % int(d)
