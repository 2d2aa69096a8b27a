"""
Phase-Space Distillation Engine

Simulates a stabilizer reduction of N copies of a single-qudit state
directly on its Wigner function:
- exact: enumerate the d^(N+1) codespace points
- bruteforce: scan all d^(2N) phase-space points (cross-check)
- mc: sample points from a non-negative Wigner function

A point (z, x) lies in the codespace when alpha.x - beta.z = s, and
decodes to the logical point (z_L, x_L) with x_L = a_z.x - b_z.z and
z_L = b_x.z - a_x.x, where (a_z|b_z) = Z_L and (a_x|b_x) = X_L.
"""

import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterator, Optional, Sequence, Tuple, Union

import numpy as np

sys.path.insert(0, str(Path(__file__).parent.parent.parent))
from config import DISTILLATION_CONFIG
from src.algebra.zd import SymplecticVector, ZdMatrix, ZdVector, solve_linear
from src.codes.stabilizer import (
    CanonicalCode, LogicalPair, StabilizerCode, canonicalize, logical_operators,
)
from src.phase_space.wigner import WignerFunction
from src.utils.errors import (
    DimensionMismatch, EmptyCodespace, NegativeInput, NoSolution, ZeroAcceptance,
)
from src.utils.logger import get_logger
from src.utils.parallel import block_map

PointLike = Union[SymplecticVector, Tuple[Sequence[int], Sequence[int]], np.ndarray]

logger = get_logger()


def _as_flat(point: PointLike, n_qudits: int) -> np.ndarray:
    if isinstance(point, SymplecticVector):
        flat = point.flat()
    elif isinstance(point, tuple) and len(point) == 2:
        flat = np.concatenate([np.asarray(point[0], dtype=np.int64), np.asarray(point[1], dtype=np.int64)])
    else:
        flat = np.asarray(point, dtype=np.int64).reshape(-1)
    if flat.size != 2 * n_qudits:
        raise DimensionMismatch(f"point of length {flat.size} for N={n_qudits}")
    return flat


def membership_mask(code: StabilizerCode, points: np.ndarray) -> np.ndarray:
    """Vectorised membership test for an array of flat (z|x) points, shape (K, 2N)."""
    N, d = code.n_qudits, int(code.d)
    z, x = points[:, :N], points[:, N:]
    lhs = (x @ code.alpha.T - z @ code.beta.T) % d
    return np.all(lhs == code.syndrome.entries, axis=1)


def membership_test(code: StabilizerCode, point: PointLike) -> bool:
    """True iff the phase-space point satisfies alpha.x - beta.z = s (mod d)."""
    flat = _as_flat(point, code.n_qudits)
    return bool(membership_mask(code, flat.reshape(1, -1))[0])


def logical_coordinates_batch(pair: LogicalPair, points: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Logical (z_L, x_L) of each flat (z|x) row."""
    N, d = pair.Z_L.n_qudits, int(pair.Z_L.d)
    z, x = points[:, :N], points[:, N:]
    a_z, b_z = pair.Z_L.a.entries, pair.Z_L.b.entries
    a_x, b_x = pair.X_L.a.entries, pair.X_L.b.entries
    x_l = (x @ a_z - z @ b_z) % d
    z_l = (z @ b_x - x @ a_x) % d
    return z_l, x_l


def logical_coordinates(pair: LogicalPair, point: PointLike) -> Tuple[int, int]:
    """Logical phase-space point (z_L, x_L) of a codespace point."""
    flat = _as_flat(point, pair.Z_L.n_qudits)
    z_l, x_l = logical_coordinates_batch(pair, flat.reshape(1, -1))
    return int(z_l[0]), int(x_l[0])


@dataclass(frozen=True, eq=False)
class CodespaceBasis:
    """
    Affine parameterisation of the codespace.

    Columns of generator_matrix (shape 2N x (N+1)) are the stabilizer rows,
    then Z_L and X_L, all read as phase-space points. Every codespace point
    is particular_solution + generator_matrix @ (u, z_L, x_L).
    """
    code: StabilizerCode
    canonical: CanonicalCode
    logical: LogicalPair
    generator_matrix: ZdMatrix
    particular_solution: ZdVector

    @property
    def n_qudits(self) -> int:
        return self.code.n_qudits


def build_codespace_basis(code: StabilizerCode) -> CodespaceBasis:
    """
    Raises:
        InvalidCode: if the code fails validation
        EmptyCodespace: if no point carries the code's syndrome
    """
    canonical = canonicalize(code)
    pair = logical_operators(canonical)
    N, d = code.n_qudits, int(code.d)

    try:
        # alpha.y1 + beta.y2 = s  gives the point x = y1, z = -y2
        y = solve_linear(code.matrix, code.syndrome).entries
    except NoSolution as e:
        raise EmptyCodespace(f"no codespace point for syndrome {code.syndrome.tolist()}") from e
    r0 = np.concatenate([-y[N:], y[:N]]) % d

    z_l, x_l = logical_coordinates_batch(pair, r0.reshape(1, -1))
    r0 = (r0 - z_l[0] * pair.Z_L.flat() - x_l[0] * pair.X_L.flat()) % d

    columns = np.vstack([code.matrix.entries, pair.Z_L.flat(), pair.X_L.flat()]).T
    return CodespaceBasis(code, canonical, pair, ZdMatrix(columns, d), ZdVector(r0, d))


def _u_digits(start: int, stop: int, length: int, d: int) -> np.ndarray:
    idx = np.arange(start, stop, dtype=np.int64)
    powers = d ** np.arange(length - 1, -1, -1, dtype=np.int64)
    return (idx[:, None] // powers) % d


def enumerate_codespace(basis: CodespaceBasis, z_l: int, x_l: int) -> Iterator[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    """Yield the d^(N-1) points (z, x) of the codespace with logical coordinates (z_l, x_l)."""
    N, d = basis.n_qudits, int(basis.code.d)
    g = basis.generator_matrix.entries
    offset = (basis.particular_solution.entries + z_l * g[:, N - 1] + x_l * g[:, N]) % d
    for u in _u_digits(0, d ** (N - 1), N - 1, d):
        flat = (offset + g[:, :N - 1] @ u) % d
        yield tuple(int(v) for v in flat[:N]), tuple(int(v) for v in flat[N:])


@dataclass(frozen=True, eq=False)
class DistillationResult:
    """Decoded single-qudit Wigner function with its acceptance probability."""
    w_out: WignerFunction
    acceptance_probability: float
    histogram: np.ndarray
    engine: str
    samples: Optional[int] = None
    accepted: Optional[int] = None
    metadata: Dict[str, Any] = field(default_factory=dict)


def _check_input(code: StabilizerCode, w_in: WignerFunction) -> None:
    if w_in.n_qudits != 1:
        raise DimensionMismatch(f"input state must be a single qudit, got N={w_in.n_qudits}")
    if w_in.d != code.d:
        raise DimensionMismatch(f"state has d={w_in.d}, code has d={code.d}")


def _finish(code: StabilizerCode, histogram: np.ndarray, acceptance: float, engine: str,
            started: float, **extra) -> DistillationResult:
    d = int(code.d)
    total = float(histogram.sum())
    if total <= DISTILLATION_CONFIG["zero_acceptance_tol"]:
        raise ZeroAcceptance(f"codespace weight {total!r} for {engine} engine")
    result = DistillationResult(
        w_out=WignerFunction(d, 1, histogram / total),
        acceptance_probability=float(acceptance),
        histogram=histogram,
        engine=engine,
        **extra,
    )
    logger.log_distillation(engine, d, code.n_qudits, result.acceptance_probability,
                            time.perf_counter() - started)
    return result


def distill_exact(code: StabilizerCode, w_in: WignerFunction,
                  threads: Optional[int] = None,
                  basis: Optional[CodespaceBasis] = None) -> DistillationResult:
    """
    Exact phase-space simulation by codespace enumeration.

    Accumulates h(z_L, x_L) += prod_i W(z_i, x_i) over all codespace points,
    in fixed blocks of u so the sum does not depend on the thread count.

    Raises:
        ZeroAcceptance: if the codespace weight is below 1e-12
    """
    started = time.perf_counter()
    _check_input(code, w_in)
    basis = basis or build_codespace_basis(code)
    N, d = code.n_qudits, int(code.d)
    g = basis.generator_matrix.entries
    stabilizer_cols, z_col, x_col = g[:, :N - 1].T, g[:, N - 1], g[:, N]
    r0 = basis.particular_solution.entries
    w = w_in.values

    total = d ** (N - 1)
    size = DISTILLATION_CONFIG["exact_block_size"]
    blocks = [(start, min(start + size, total)) for start in range(0, total, size)]

    def accumulate(block: Tuple[int, int]) -> np.ndarray:
        base = _u_digits(block[0], block[1], N - 1, d) @ stabilizer_cols + r0
        hist = np.zeros(d * d)
        for zl in range(d):
            for xl in range(d):
                pts = (base + zl * z_col + xl * x_col) % d
                hist[zl * d + xl] = np.prod(w[pts[:, :N] * d + pts[:, N:]], axis=1).sum()
        return hist

    partials = block_map(accumulate, blocks, threads)
    histogram = np.zeros(d * d)
    for part in partials:
        histogram += part
    return _finish(code, histogram, histogram.sum(), "exact", started)


def distill_bruteforce(code: StabilizerCode, w_in: WignerFunction) -> DistillationResult:
    """Reference engine: test every one of the d^(2N) points for membership."""
    started = time.perf_counter()
    _check_input(code, w_in)
    N, d = code.n_qudits, int(code.d)
    pair = logical_operators(canonicalize(code))

    points = _u_digits(0, d ** (2 * N), 2 * N, d)
    # digits are (z1, x1, z2, x2, ...); regroup to (z | x)
    points = np.hstack([points[:, 0::2], points[:, 1::2]])
    inside = points[membership_mask(code, points)]
    weights = np.prod(w_in.values[inside[:, :N] * d + inside[:, N:]], axis=1)
    z_l, x_l = logical_coordinates_batch(pair, inside)
    histogram = np.bincount(z_l * d + x_l, weights=weights, minlength=d * d).astype(float)
    return _finish(code, histogram, histogram.sum(), "bruteforce", started)


def distill_mc(code: StabilizerCode, w_in: WignerFunction, samples: int, seed: int,
               threads: Optional[int] = None) -> DistillationResult:
    """
    Monte Carlo simulation for non-negative Wigner inputs.

    Each sample draws N i.i.d. points from W, keeps it if it lies in the
    codespace and bins it by logical coordinates. Sample block b uses a
    PCG64 stream keyed on (seed, b), so reruns are bit-identical for any
    thread count.

    Raises:
        NegativeInput: if any entry of w_in is below -1e-12
        ZeroAcceptance: if no sample is accepted
    """
    started = time.perf_counter()
    _check_input(code, w_in)
    if samples < 1:
        raise ValueError(f"samples must be positive, got {samples}")
    if w_in.values.min() < -DISTILLATION_CONFIG["negative_input_tol"]:
        raise NegativeInput(f"minimum Wigner entry {w_in.values.min()!r} is negative")

    N, d = code.n_qudits, int(code.d)
    pair = logical_operators(canonicalize(code))
    cdf = np.cumsum(np.clip(w_in.values, 0.0, None))
    cdf /= cdf[-1]

    size = DISTILLATION_CONFIG["mc_block_samples"]
    blocks = [(b, min(size, samples - b * size)) for b in range((samples + size - 1) // size)]

    def sample(block: Tuple[int, int]) -> np.ndarray:
        index, count = block
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(index,))))
        draws = np.searchsorted(cdf, rng.random((count, N)), side="right")
        draws = np.minimum(draws, d * d - 1)
        points = np.hstack([draws // d, draws % d])
        inside = points[membership_mask(code, points)]
        z_l, x_l = logical_coordinates_batch(pair, inside)
        return np.bincount(z_l * d + x_l, minlength=d * d).astype(np.int64)

    counts = np.zeros(d * d, dtype=np.int64)
    for part in block_map(sample, blocks, threads):
        counts += part
    accepted = int(counts.sum())
    if accepted == 0:
        raise ZeroAcceptance(f"no sample of {samples} landed in the codespace")
    return _finish(code, counts.astype(float), accepted / samples, "mc", started,
                   samples=samples, accepted=accepted,
                   metadata={"prng": DISTILLATION_CONFIG["prng"], "seed": seed,
                             "block_samples": size})
