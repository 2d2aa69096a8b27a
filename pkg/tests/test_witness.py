"""
Contextuality Witness Tests

Unit tests for the stabilizer projector sets, the exclusivity graph, the
Sigma identity, witness values and the independent set solver.
"""

import sys
from pathlib import Path

import networkx as nx
import numpy as np
import pytest

# Add project root
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src.contextuality.independent_set import is_independent, max_independent_set
from src.contextuality.projectors import (
    clifford_group, entangled_projectors, separable_projectors, single_qudit_stabilizer_states,
)
from src.contextuality.witness import (
    build_graph, ontological_independent_set, ontological_sweep,
    sigma_identity_check, witness_value,
)
from src.phase_space.wigner import density_from_wigner, nu_family, wigner_from_density
from src.serialization.formats import read_dimacs, write_dimacs
from src.utils.errors import BudgetExceeded, ShapeError, SolverTimedOut


def random_state(d: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = g @ g.conj().T
    return rho / np.trace(rho)


class TestProjectors:
    """Test suite for the vertex sets."""

    def test_stabilizer_states(self):
        """Test d(d+1) states, each supported on one line of d points."""
        states = single_qudit_stabilizer_states(3)
        assert len(states) == 12
        for state in states:
            w = wigner_from_density(np.outer(state.vector, state.vector.conj()))
            support = [divmod(i, 3) for i in np.flatnonzero(w.values > 1e-9)]
            assert len(support) == 3
            assert all(state.on_line(p, 3) for p in support)
            assert np.allclose(w.values[w.values > 1e-9], 1 / 3)

    def test_each_point_on_d_plus_one_lines(self):
        """Test that every point lies on one line per direction."""
        states = single_qudit_stabilizer_states(3)
        for u in range(3):
            for v in range(3):
                assert sum(s.on_line((u, v), 3) for s in states) == 4

    def test_separable_count(self):
        """Test d(d^2 - 1) separable projectors for every face."""
        for u in range(3):
            for v in range(3):
                assert len(separable_projectors(3, u, v)) == 24

    def test_clifford_group_size(self):
        """Test |SL(2, Z_d)| = d(d^2 - 1)."""
        assert len(clifford_group(3)) == 24
        assert len(clifford_group(5)) == 120

    def test_entangled_projectors(self):
        """Test d^3(d^2 - 1) distinct maximally entangled states."""
        vertices = entangled_projectors(3)
        assert len(vertices) == 216
        vecs = np.stack([v.vector for v in vertices])
        overlaps = np.abs(vecs.conj() @ vecs.T) ** 2
        np.fill_diagonal(overlaps, 0.0)
        assert overlaps.max() < 1 - 1e-10
        for v in vertices[:20]:
            psi = v.vector.reshape(3, 3)
            assert np.allclose(psi @ psi.conj().T, np.eye(3) / 3, atol=1e-12)


class TestGraph:
    """Test suite for the exclusivity graph."""

    def test_counts(self, graph_00):
        """Test 240 vertices and 7116 edges at d=3."""
        assert graph_00.n_vertices == 240
        assert graph_00.n_edges == 7116

    def test_edges_are_orthogonal(self, graph_00):
        """Test that every edge joins orthogonal vectors."""
        vecs = graph_00.vectors()
        for i, j in graph_00.edges[:500]:
            assert abs(np.vdot(vecs[i], vecs[j])) ** 2 < 1e-10
        assert all(i != j for i, j in graph_00.edges)

    def test_thread_independent(self, graph_00):
        """Test the same edge set for one thread."""
        assert sorted(build_graph(3, 0, 0, threads=1).edges) == sorted(graph_00.edges)

    def test_d_limit(self):
        """Test that d above the witness limit is refused."""
        with pytest.raises(BudgetExceeded):
            build_graph(7, 0, 0)

    def test_dimacs(self, graph_00, tmp_path):
        """Test the DIMACS header and edge lines."""
        path = write_dimacs(graph_00, tmp_path / "g.dimacs")
        assert path.read_text().splitlines()[0] == "p edge 240 7116"
        g = read_dimacs(path)
        assert g.number_of_nodes() == 240
        assert nx.utils.edges_equal(g.edges(), graph_00.to_networkx().edges())


class TestSigma:
    """Test suite for the projector-sum identity."""

    @pytest.mark.parametrize("u,v", [(u, v) for u in range(3) for v in range(3)])
    def test_identity_d3(self, u, v):
        """Test Sigma = (d^3 - A/d) (x) 1 at every face."""
        assert sigma_identity_check(3, u, v) <= 1e-9

    @pytest.mark.slow
    def test_identity_d5(self):
        """Test the identity at d=5."""
        assert sigma_identity_check(5, 2, 3) <= 1e-9


class TestWitness:
    """Test suite for witness values."""

    def test_maximally_mixed(self):
        """Test the value 80/3, below the bound 27."""
        report = witness_value(np.eye(3) / 3, None, 0, 0)
        assert report.value == pytest.approx(80 / 3, abs=1e-9)
        assert report.bound == 27
        assert not report.contextual

    def test_strange_state(self):
        """Test the value 28 at the origin."""
        report = witness_value(density_from_wigner(nu_family(3, -1 / 3)), None, 0, 0)
        assert report.value == pytest.approx(28.0, abs=1e-9)
        assert report.contextual

    def test_face_state_not_contextual(self):
        """Test that nu = 0 sits exactly at the bound."""
        report = witness_value(density_from_wigner(nu_family(3, 0.0, (1, 1))), None, 1, 1)
        assert report.value == pytest.approx(27.0, abs=1e-9)
        assert not report.contextual

    def test_ancilla_independent(self):
        """Test that the ancilla state does not change the value."""
        rho = random_state(3, 0)
        values = [witness_value(rho, sigma, 2, 1).value
                  for sigma in (None, random_state(3, 1), random_state(3, 2))]
        assert np.allclose(values, values[0], atol=1e-9)

    def test_closed_form_and_negativity(self):
        """Test <Sigma> = d^3 - d W(u, v) and contextual iff W(u, v) < 0."""
        for seed in range(10):
            rho = random_state(3, seed)
            w = wigner_from_density(rho)
            for u, v in [(0, 0), (1, 2)]:
                report = witness_value(rho, None, u, v)
                assert report.value == pytest.approx(report.closed_form, abs=1e-9)
                assert report.value == pytest.approx(27 - 3 * w.value_at((u, v)), abs=1e-9)
                assert report.contextual == (w.value_at((u, v)) < -1e-9)

    def test_shape_check(self):
        """Test that non-square input is rejected."""
        with pytest.raises(ShapeError):
            witness_value(np.ones((3, 2)), None, 0, 0)


class TestIndependentSets:
    """Test suite for ontological sets and the exact solver."""

    def test_ontological_sets_are_independent(self, graph_00):
        """Test independence for several ontic points."""
        for point, ancilla in [((1, 1), (0, 0)), ((2, 0), (1, 2)), ((0, 1), (2, 2))]:
            members = ontological_independent_set(3, 0, 0, point, ancilla)
            assert is_independent(graph_00, members)

    def test_ontological_maximum(self):
        """Test that the best ontic point reaches 27."""
        sweep = ontological_sweep(3, 0, 0)
        assert sweep.best_size == 27
        assert len(sweep.sizes) == 81

    def test_solver_small_graphs(self):
        """Test empty, complete and cycle graphs."""
        assert max_independent_set(nx.empty_graph(6)).size == 6
        assert max_independent_set(nx.complete_graph(6)).size == 1
        result = max_independent_set(nx.cycle_graph(7))
        assert result.size == 3
        assert is_independent(nx.cycle_graph(7), result.certificate)
        assert max_independent_set(nx.empty_graph(0)).size == 0

    def test_solver_matches_networkx(self):
        """Test against clique search in the complement of random graphs."""
        for seed in range(5):
            g = nx.gnp_random_graph(18, 0.3, seed=seed)
            expected = max(len(c) for c in nx.find_cliques(nx.complement(g)))
            assert max_independent_set(g).size == expected

    def test_bad_initial(self):
        """Test that a dependent seed set is refused."""
        with pytest.raises(ValueError):
            max_independent_set(nx.complete_graph(3), initial=[0, 1])

    def test_timeout(self, graph_00):
        """Test that a zero budget returns the seed certificate."""
        seed_set = ontological_sweep(3, 0, 0).best_set
        try:
            result = max_independent_set(graph_00, 0.0, initial=seed_set)
            assert result.size >= 27
        except SolverTimedOut as e:
            assert e.best_size >= 27
            assert is_independent(graph_00, e.certificate)

    @pytest.mark.slow
    def test_independence_number(self, graph_00):
        """Test alpha = d^3 at d=3."""
        seed_set = ontological_sweep(3, 0, 0).best_set
        result = max_independent_set(graph_00, initial=seed_set)
        assert result.size == 27


@pytest.fixture(scope="module")
def graph_00():
    """Exclusivity graph at d=3, face (0, 0)."""
    return build_graph(3, 0, 0)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
