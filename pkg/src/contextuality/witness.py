"""
Contextuality Witness

Exclusivity graph of the separable and entangled stabilizer projectors for
a face (u, v), the sum-of-projectors operator Sigma, its closed form
(d^3 - A_(u,v)/d) (x) 1, and the witness <Sigma> against the
non-contextual bound d^3. Also builds the independent sets induced by
ontological (phase-space point) assignments.
"""

import sys
import time
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from pathlib import Path
from typing import List, Optional, Tuple

import networkx as nx
import numpy as np

sys.path.insert(0, str(Path(__file__).parent.parent.parent))
from config import WITNESS_CONFIG
from src.algebra.zd import Prime
from src.contextuality.projectors import (
    ProjectorVertex, entangled_projectors, separable_projectors,
)
from src.phase_space.wigner import Point, phase_point_operator, wigner_from_density
from src.utils.errors import BudgetExceeded, ShapeError
from src.utils.logger import get_logger
from src.utils.parallel import block_map

logger = get_logger()


@dataclass(frozen=True, eq=False)
class ExclusivityGraph:
    """Projector vertices joined when orthogonal."""
    d: Prime
    face: Point
    vertices: List[ProjectorVertex]
    edges: List[Tuple[int, int]]

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def vectors(self) -> np.ndarray:
        return np.stack([v.vector for v in self.vertices])

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n_vertices))
        g.add_edges_from(self.edges)
        return g


@dataclass(frozen=True)
class WitnessReport:
    face: Point
    value: float
    bound: float
    contextual: bool
    closed_form: Optional[float] = None

    def to_dict(self) -> dict:
        return {"face": list(self.face), "value": self.value, "bound": self.bound,
                "contextual": self.contextual}


def _check_d(d: int) -> int:
    d = int(Prime(d))
    if d > WITNESS_CONFIG["max_d"]:
        raise BudgetExceeded(f"witness graphs are limited to d <= {WITNESS_CONFIG['max_d']}")
    return d


@lru_cache(maxsize=None)
def _vertex_sets(d: int, u: int, v: int) -> Tuple[ProjectorVertex, ...]:
    return tuple(separable_projectors(d, u, v) + entangled_projectors(d))


def graph_vertices(d: int, u: int, v: int) -> List[ProjectorVertex]:
    d = _check_d(d)
    return list(_vertex_sets(d, u % d, v % d))


def build_graph(d: int, u: int, v: int, threads: Optional[int] = None) -> ExclusivityGraph:
    """
    Graph on the d(d^2-1) + d^3(d^2-1) projectors, with an edge wherever
    Tr(Pi_i Pi_j) = |<psi_i|psi_j>|^2 falls below the orthogonality tolerance.
    """
    started = time.perf_counter()
    d = _check_d(d)
    vertices = graph_vertices(d, u, v)
    vecs = np.stack([vx.vector for vx in vertices])
    n = len(vertices)
    tol = WITNESS_CONFIG["orthogonality_tol"]
    step = WITNESS_CONFIG["gram_block_rows"]

    def orthogonal_pairs(start: int) -> List[Tuple[int, int]]:
        overlaps = np.abs(vecs[start:start + step].conj() @ vecs.T) ** 2
        rows, cols = np.nonzero(overlaps < tol)
        rows = rows + start
        keep = cols > rows
        return list(zip(rows[keep].tolist(), cols[keep].tolist()))

    edges = [e for part in block_map(orthogonal_pairs, list(range(0, n, step)), threads) for e in part]
    graph = ExclusivityGraph(Prime(d), (u % d, v % d), vertices, edges)
    logger.log_graph(d, graph.face, graph.n_vertices, graph.n_edges, time.perf_counter() - started)
    return graph


@lru_cache(maxsize=None)
def _sigma(d: int, u: int, v: int) -> np.ndarray:
    vecs = np.stack([vx.vector for vx in _vertex_sets(d, u, v)])
    out = vecs.T @ vecs.conj()
    out.setflags(write=False)
    return out


def sigma_operator(d: int, u: int, v: int) -> np.ndarray:
    """Literal sum of all vertex projectors."""
    d = _check_d(d)
    return _sigma(d, u % d, v % d)


def sigma_closed_form(d: int, u: int, v: int) -> np.ndarray:
    d = int(d)
    a = phase_point_operator(d, u, v).matrix
    return np.kron(d ** 3 * np.eye(d) - a / d, np.eye(d))


def sigma_identity_check(d: int, u: int, v: int) -> float:
    """Max entrywise deviation of the projector sum from its closed form."""
    return float(np.abs(sigma_operator(d, u, v) - sigma_closed_form(d, u, v)).max())


def witness_value(rho: np.ndarray, sigma: Optional[np.ndarray], u: int, v: int) -> WitnessReport:
    """
    Evaluate <Sigma> on rho (x) sigma.

    The ancilla sigma defaults to the maximally mixed state; the value does
    not depend on it. contextual is set when the value exceeds d^3 by more
    than the configured margin.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ShapeError(f"state must be a square matrix, got {rho.shape}")
    d = _check_d(rho.shape[0])
    sigma = np.eye(d) / d if sigma is None else np.asarray(sigma, dtype=complex)
    if sigma.shape != (d, d):
        raise ShapeError(f"ancilla must be {d}x{d}, got {sigma.shape}")

    value = float(np.trace(sigma_operator(d, u, v) @ np.kron(rho, sigma)).real)
    closed = float(d ** 3 - d * wigner_from_density(rho, 1).value_at((u, v)))
    bound = float(d ** 3)
    return WitnessReport((u % d, v % d), value, bound,
                         value > bound + WITNESS_CONFIG["contextual_margin"], closed)


def two_qudit_phase_point(d: int, point: Point, ancilla_point: Point) -> np.ndarray:
    return np.kron(phase_point_operator(d, *point).matrix, phase_point_operator(d, *ancilla_point).matrix)


def ontological_independent_set(d: int, u: int, v: int, point: Point,
                                ancilla_point: Point) -> List[int]:
    """
    Vertices assigned outcome 1 at the ontic point (point, ancilla_point).

    A stabilizer projector has a two-qudit Wigner function equal to 1/d^2 on
    its support, so its outcome is 1 exactly when d^2 W(q, q') = 1.
    """
    d = _check_d(d)
    vecs = np.stack([vx.vector for vx in graph_vertices(d, u, v)])
    kernel = two_qudit_phase_point(d, point, ancilla_point)
    wigner = np.einsum("vi,ij,vj->v", vecs.conj(), kernel, vecs).real / d ** 4
    return [int(i) for i in np.flatnonzero(d * d * wigner > 0.5)]


@dataclass(frozen=True)
class OntologicalSweep:
    best_size: int
    best_point: Tuple[Point, Point]
    best_set: List[int]
    sizes: dict = field(default_factory=dict)


def ontological_sweep(d: int, u: int, v: int) -> OntologicalSweep:
    """Size of the ontological independent set at every one of the d^4 ontic points."""
    d = _check_d(d)
    sizes = {}
    best = None
    for z, x, z2, x2 in product(range(d), repeat=4):
        members = ontological_independent_set(d, u, v, (z, x), (z2, x2))
        sizes[((z, x), (z2, x2))] = len(members)
        if best is None or len(members) > len(best[1]):
            best = (((z, x), (z2, x2)), members)
    return OntologicalSweep(len(best[1]), best[0], best[1], sizes)
