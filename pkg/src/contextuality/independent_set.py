"""
Exact Maximum Independent Set

Branch and bound for the maximum clique of the complement graph, with
vertex sets held as Python-int bitsets and greedy colour classes as the
upper bound at every node. An initial certificate (for example an
ontological independent set) seeds the incumbent.
"""

import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import networkx as nx

sys.path.insert(0, str(Path(__file__).parent.parent.parent))
from config import WITNESS_CONFIG
from src.utils.errors import SolverTimedOut
from src.utils.logger import get_logger

logger = get_logger()


@dataclass(frozen=True)
class IndependentSetResult:
    size: int
    certificate: List[int]
    nodes_explored: int


def _as_networkx(graph) -> nx.Graph:
    if isinstance(graph, nx.Graph):
        return graph
    return graph.to_networkx()


def is_independent(graph, vertices: Iterable[int]) -> bool:
    g = _as_networkx(graph)
    return g.subgraph(list(vertices)).number_of_edges() == 0


class _Search:
    """One branch-and-bound run; holds no state shared between calls."""

    def __init__(self, candidates: List[int], deadline: float):
        self.candidates = candidates
        self.deadline = deadline
        self.best: List[int] = []
        self.nodes = 0

    def color_bounds(self, p: int) -> Tuple[List[int], List[int]]:
        """Vertices of p ordered by greedy colour class, with running colour counts."""
        order, bounds = [], []
        color = 0
        uncolored = p
        while uncolored:
            color += 1
            q = uncolored
            while q:
                low = q & -q
                v = low.bit_length() - 1
                # a colour class must be a clique of the original graph
                q &= ~low & ~self.candidates[v]
                uncolored &= ~low
                order.append(v)
                bounds.append(color)
        return order, bounds

    def expand(self, p: int, current: List[int]) -> None:
        self.nodes += 1
        if self.nodes & 1023 == 0 and time.monotonic() > self.deadline:
            raise TimeoutError
        order, bounds = self.color_bounds(p)
        for i in range(len(order) - 1, -1, -1):
            if len(current) + bounds[i] <= len(self.best):
                return
            v = order[i]
            current.append(v)
            nxt = p & self.candidates[v]
            if nxt:
                self.expand(nxt, current)
            elif len(current) > len(self.best):
                self.best = list(current)
            current.pop()
            p &= ~(1 << v)


def max_independent_set(graph: Union[nx.Graph, "ExclusivityGraph"],
                        time_budget_seconds: Optional[float] = None,
                        initial: Optional[Sequence[int]] = None) -> IndependentSetResult:
    """
    Exact independence number with a verified certificate.

    Args:
        graph: networkx graph on nodes 0..n-1, or an ExclusivityGraph
        time_budget_seconds: Wall-clock budget (config default if None)
        initial: Known independent set used as the starting incumbent

    Raises:
        SolverTimedOut: carrying the best certificate found
    """
    g = _as_networkx(graph)
    nodes = sorted(g.nodes())
    n = len(nodes)
    if nodes != list(range(n)):
        g = nx.convert_node_labels_to_integers(g, ordering="sorted")

    budget = WITNESS_CONFIG["mis_budget_seconds"] if time_budget_seconds is None else time_budget_seconds
    full = (1 << n) - 1
    # neighbours in the complement graph
    candidates = [full & ~(1 << v) for v in range(n)]
    for i, j in g.edges():
        candidates[i] &= ~(1 << j)
        candidates[j] &= ~(1 << i)

    search = _Search(candidates, time.monotonic() + budget)
    if initial is not None:
        if not is_independent(g, initial):
            raise ValueError("initial certificate is not an independent set")
        search.best = sorted(initial)

    try:
        if n:
            search.expand(full, [])
    except TimeoutError:
        logger.warning(f"independent set search timed out at size {len(search.best)}")
        raise SolverTimedOut(len(search.best), sorted(search.best))

    certificate = sorted(search.best)
    if not is_independent(g, certificate):
        raise RuntimeError("solver certificate is not independent")
    return IndependentSetResult(len(certificate), certificate, search.nodes)
