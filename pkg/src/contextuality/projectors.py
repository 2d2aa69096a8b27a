"""
Stabilizer Projector Sets

Builds the two families of rank-1 two-qudit projectors that form the
vertices of the exclusivity graph:
- separable: |phi> (x) |k> with phi a single-qudit stabilizer state whose
  Wigner function vanishes at the chosen face
- entangled: Choi states (U (x) 1)|Phi> of every single-qudit Clifford U

Cliffords are enumerated as Weil (metaplectic) unitaries, generated by the
Fourier, quadratic-phase and multiplier gates, composed with all d^2
Weyl translations.
"""

import sys
from collections import deque
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from pathlib import Path
from typing import List, Tuple

import numpy as np

sys.path.insert(0, str(Path(__file__).parent.parent.parent))
from src.algebra.zd import Prime, mod_inverse
from src.phase_space.wigner import Point, omega, weyl_matrix


class VertexKind(Enum):
    SEPARABLE = "separable"
    ENTANGLED = "entangled"


@dataclass(frozen=True, eq=False)
class ProjectorVertex:
    """Rank-1 projector |psi><psi| on two qudits, stored as psi."""
    kind: VertexKind
    vector: np.ndarray
    label: str

    @property
    def matrix(self) -> np.ndarray:
        return np.outer(self.vector, self.vector.conj())


@dataclass(frozen=True, eq=False)
class StabilizerState:
    """
    Eigenstate of T(g) with eigenvalue w^s, for g = (g_z, g_x).

    Its Wigner function is 1/d on the line {q : g_z q_x - g_x q_z = s}.
    """
    direction: Tuple[int, int]
    eigenvalue: int
    vector: np.ndarray

    def on_line(self, point: Point, d: int) -> bool:
        g_z, g_x = self.direction
        return (g_z * point[1] - g_x * point[0]) % d == self.eigenvalue


def _normalize_phase(v: np.ndarray) -> np.ndarray:
    """Scale so the first entry of largest modulus is real and positive."""
    idx = int(np.argmax(np.abs(v) > np.abs(v).max() - 1e-9))
    return v * (abs(v[idx]) / v[idx])


def _phase_key(v: np.ndarray) -> bytes:
    # adding zero folds -0.0 into 0.0
    return (np.round(_normalize_phase(v), 8) + (0.0 + 0.0j)).tobytes()


def directions(d: int) -> List[Tuple[int, int]]:
    """The d+1 Pauli bases: Z, then Z^c X for c = 0..d-1."""
    return [(1, 0)] + [(c, 1) for c in range(d)]


@lru_cache(maxsize=None)
def single_qudit_stabilizer_states(d: int) -> Tuple[StabilizerState, ...]:
    """All d(d+1) single-qudit stabilizer states."""
    d = int(Prime(d))
    w = omega(d)
    states = []
    for g in directions(d):
        t = weyl_matrix(d, *g)
        for s in range(d):
            projector = sum(w ** (-s * k % d) * np.linalg.matrix_power(t, k) for k in range(d)) / d
            values, vectors = np.linalg.eigh(projector)
            psi = _normalize_phase(vectors[:, int(np.argmax(values))])
            states.append(StabilizerState(g, s, psi))
    return tuple(states)


def separable_projectors(d: int, u: int, v: int) -> List[ProjectorVertex]:
    """d(d^2 - 1) projectors |phi> (x) |k> with phi's line avoiding (u, v)."""
    d = int(Prime(d))
    vertices = []
    for state in single_qudit_stabilizer_states(d):
        if state.on_line((u, v), d):
            continue
        for k in range(d):
            ket = np.zeros(d, dtype=complex)
            ket[k] = 1.0
            vertices.append(ProjectorVertex(
                VertexKind.SEPARABLE, np.kron(state.vector, ket),
                f"sep:g={state.direction},s={state.eigenvalue},k={k}",
            ))
    return vertices


@lru_cache(maxsize=None)
def clifford_group(d: int) -> Tuple[np.ndarray, ...]:
    """
    Symplectic part of the single-qudit Clifford group, modulo phase.

    Breadth-first closure of the Fourier, quadratic-phase and multiplier
    gates; d(d^2 - 1) unitaries.
    """
    d = int(Prime(d))
    w = omega(d)
    k = np.arange(d)
    half = mod_inverse(2, d)
    fourier = w ** np.outer(k, k) / np.sqrt(d)
    phase = np.diag(w ** (half * k * k % d))
    multiplier = np.zeros((d, d), dtype=complex)
    multiplier[(2 * k) % d, k] = 1.0
    generators = [fourier, phase, multiplier]

    identity = np.eye(d, dtype=complex)
    seen = {_phase_key(identity.reshape(-1))}
    group = [identity]
    queue = deque([identity])
    while queue:
        current = queue.popleft()
        for gen in generators:
            nxt = gen @ current
            key = _phase_key(nxt.reshape(-1))
            if key not in seen:
                seen.add(key)
                group.append(nxt)
                queue.append(nxt)
    return tuple(group)


def entangled_projectors(d: int) -> List[ProjectorVertex]:
    """d^3(d^2 - 1) Choi states of single-qudit Cliffords, grouped by translation."""
    d = int(Prime(d))
    vertices = []
    seen = set()
    for a in range(d):
        for b in range(d):
            t = weyl_matrix(d, a, b)
            for i, u in enumerate(clifford_group(d)):
                choi = (t @ u).reshape(-1) / np.sqrt(d)
                key = _phase_key(choi)
                if key in seen:
                    continue
                seen.add(key)
                vertices.append(ProjectorVertex(VertexKind.ENTANGLED, choi, f"ent:T=({a},{b}),S={i}"))
    expected = d ** 3 * (d * d - 1)
    if len(vertices) != expected:
        raise RuntimeError(f"enumerated {len(vertices)} Clifford Choi states, expected {expected}")
    return vertices
