"""
Nu-Family Sweeps

Tracks how a stabilizer reduction maps the single-parameter family of
states with one distinguished Wigner entry nu: nu_out = f(nu_in), read at
a fixed face. f(0) > 0 for every nontrivial code, so states on a face of
the Wigner polytope are mapped strictly into its interior. States a little
outside the face can stay bound too; bound_margin measures how far.
"""

import sys
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from tqdm import tqdm

sys.path.insert(0, str(Path(__file__).parent.parent.parent))
from config import DISTILLATION_CONFIG
from src.codes.stabilizer import StabilizerCode, canonicalize, is_trivial, random_code
from src.distillation.engine import CodespaceBasis, build_codespace_basis, distill_exact
from src.phase_space.wigner import Point, WignerFunction, nu_family
from src.utils.errors import ZeroAcceptance
from src.utils.logger import get_logger

logger = get_logger()


@dataclass(frozen=True)
class SweepPoint:
    nu_in: float
    nu_out: float
    acceptance_probability: float


def nu_grid(nu_min: float, nu_max: float, steps: int) -> List[float]:
    """Evenly spaced grid including both ends."""
    if steps < 2:
        raise ValueError(f"a sweep needs at least 2 steps, got {steps}")
    return [float(v) for v in np.linspace(nu_min, nu_max, steps)]


def nu_sweep(code: StabilizerCode, point: Point, grid: Sequence[float],
             threads: Optional[int] = None) -> List[SweepPoint]:
    """
    Run the exact engine on the nu family at `point` for every grid value.

    nu_out is the output Wigner entry at the same point.
    """
    basis = build_codespace_basis(code)
    results = []
    for nu in grid:
        res = distill_exact(code, nu_family(code.d, nu, point), threads=threads, basis=basis)
        results.append(SweepPoint(float(nu), res.w_out.value_at(point), res.acceptance_probability))
    return results


def sweep_frame(points: Sequence[SweepPoint]) -> pd.DataFrame:
    return pd.DataFrame(
        [(p.nu_in, p.nu_out, p.acceptance_probability) for p in points],
        columns=["nu_in", "nu_out", "acceptance_probability"],
    )


def verify_bound_gap(code: StabilizerCode, point: Point, threads: Optional[int] = None,
                     basis: Optional[CodespaceBasis] = None) -> float:
    """f(0) at the given face: positive for nontrivial codes, zero for trivial ones."""
    res = distill_exact(code, nu_family(code.d, 0.0, point), threads=threads, basis=basis)
    return res.w_out.value_at(point)


def bound_gap_over_faces(code: StabilizerCode, threads: Optional[int] = None) -> Tuple[float, np.ndarray]:
    """
    f(0) at every face.

    Returns:
        (minimum gap, gaps as a d x d array indexed [u, v])
    """
    d = int(code.d)
    basis = build_codespace_basis(code)
    gaps = np.array([[verify_bound_gap(code, (u, v), threads, basis) for v in range(d)]
                     for u in range(d)])
    return float(gaps.min()), gaps


def maps_face_to_interior(code: StabilizerCode, w_in: WignerFunction,
                          threads: Optional[int] = None) -> bool:
    """True iff every output entry is strictly positive."""
    res = distill_exact(code, w_in, threads=threads)
    return bool(np.all(res.w_out.values > 0.0))


def _output_is_bound(code: StabilizerCode, nu: float, point: Point,
                     basis: CodespaceBasis, threads: Optional[int]) -> bool:
    try:
        res = distill_exact(code, nu_family(code.d, nu, point), threads=threads, basis=basis)
    except ZeroAcceptance:
        return False
    return bool(res.w_out.values.min() >= 0.0)


def bound_margin(code: StabilizerCode, point: Point,
                 nu_floor: Optional[float] = None,
                 tol: Optional[float] = None,
                 threads: Optional[int] = None,
                 basis: Optional[CodespaceBasis] = None) -> float:
    """
    Most negative nu_in whose distilled output has no negative Wigner entry.

    Bisects on [nu_floor, 0] with the exact engine, assuming the bound
    inputs form an interval ending at nu = 0. Inputs with zero acceptance
    count as unbound. Trivial codes return 0.0 exactly; a code that keeps
    the whole range bound returns nu_floor.

    Args:
        code: Stabilizer code
        point: Face (u, v) carrying nu
        nu_floor: Lower end of the search (config default -1/3)
        tol: Bracket width at which the search stops
    """
    nu_floor = DISTILLATION_CONFIG["margin_floor"] if nu_floor is None else float(nu_floor)
    tol = DISTILLATION_CONFIG["margin_tol"] if tol is None else float(tol)
    if nu_floor >= 0.0:
        raise ValueError(f"nu_floor must be negative, got {nu_floor}")
    basis = basis or build_codespace_basis(code)
    # raises ZeroAcceptance when even the face state is rejected
    distill_exact(code, nu_family(code.d, 0.0, point), threads=threads, basis=basis)

    if _output_is_bound(code, nu_floor, point, basis, threads):
        return nu_floor
    lo, hi = nu_floor, 0.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _output_is_bound(code, mid, point, basis, threads):
            hi = mid
        else:
            lo = mid
    logger.debug(f"bound margin at face {tuple(point)}: {hi:.12g}")
    return hi


def bound_margin_over_faces(code: StabilizerCode, threads: Optional[int] = None) -> Tuple[float, np.ndarray]:
    """
    bound_margin at every face.

    Returns:
        (largest margin, i.e. the one that holds at every face,
         margins as a d x d array indexed [u, v])
    """
    d = int(code.d)
    basis = build_codespace_basis(code)
    margins = np.array([[bound_margin(code, (u, v), threads=threads, basis=basis) for v in range(d)]
                        for u in range(d)])
    return float(margins.max()), margins


@dataclass(frozen=True)
class SurveyRow:
    digest: str
    n_qudits: int
    trivial: bool
    min_gap: float
    margin: float

    @property
    def consistent(self) -> bool:
        """Trivial codes have zero gap and margin, nontrivial codes a positive gap."""
        if self.trivial:
            return self.min_gap == 0.0 and self.margin == 0.0
        return self.min_gap > 0.0


def theorem2_survey(d: int, n_max: int, codes: int, seed: int,
                    threads: Optional[int] = None, progress: bool = False) -> List[SurveyRow]:
    """
    Sample random codes with N = 2..n_max (cycled) and record, for each,
    the minimum f(0) over all faces and the bound margin that holds at
    every face.
    """
    if n_max < 2:
        raise ValueError(f"n_max must be at least 2, got {n_max}")
    rows = []
    for i in tqdm(range(codes), desc="codes", disable=not progress):
        n = 2 + i % (n_max - 1)
        code = random_code(d, n, seed=[seed, i])
        canonical = canonicalize(code)
        min_gap, _ = bound_gap_over_faces(code, threads)
        margin, _ = bound_margin_over_faces(code, threads)
        rows.append(SurveyRow(canonical.digest(), n, is_trivial(canonical), min_gap, margin))
    return rows


def survey_frame(rows: Sequence[SurveyRow]) -> pd.DataFrame:
    return pd.DataFrame(
        [(r.digest, r.n_qudits, r.trivial, r.min_gap, r.margin, r.consistent) for r in rows],
        columns=["digest", "N", "trivial", "min_gap", "margin", "consistent"],
    )
