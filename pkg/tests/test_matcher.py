"""Monomorphism enumerator tests, including brute-force oracle equivalence."""

from __future__ import annotations

import itertools
import random

import pytest

from qflow.matcher import (
    enumerate_monomorphisms,
    mapping_feasible,
    pattern_order,
    workflow_monomorphisms,
)

from .conftest import chain_workflow, make_network, random_small_instance


def brute_force_monomorphisms(pattern_size, pattern_edges, network, min_qubits=None, induced=False):
    """Oracle: filter all injective index tuples by adjacency preservation."""
    edges = {(min(a, b), max(a, b)) for a, b in pattern_edges}
    found = []
    for tup in itertools.permutations(range(len(network.nodes)), pattern_size):
        ok = all(network.has_link(tup[a], tup[b]) for a, b in edges)
        if ok and induced:
            for a in range(pattern_size):
                for b in range(a + 1, pattern_size):
                    if (a, b) not in edges and network.has_link(tup[a], tup[b]):
                        ok = False
        if ok and min_qubits is not None:
            ok = all(network.nodes[tup[v]].qubits >= min_qubits[v] for v in range(pattern_size))
        if ok:
            found.append({v: tup[v] for v in range(pattern_size)})
    return found


class TestExamples:
    def test_two_node_path_into_triangle_gives_six(self):
        k3 = make_network([10, 10, 10], [(0, 1), (0, 2), (1, 2)])
        got = list(enumerate_monomorphisms(2, [(0, 1)], k3))
        assert len(got) == 6
        assert got == brute_force_monomorphisms(2, [(0, 1)], k3) or sorted(
            tuple(sorted(m.items())) for m in got
        ) == sorted(tuple(sorted(m.items())) for m in brute_force_monomorphisms(2, [(0, 1)], k3))

    def test_single_vertex_pattern_yields_every_node(self):
        host = make_network([5, 5, 5, 5], [(0, 1), (1, 2), (2, 3)])
        got = list(enumerate_monomorphisms(1, [], host))
        assert got == [{0: 0}, {0: 1}, {0: 2}, {0: 3}]

    def test_triangle_into_path_yields_nothing(self):
        path = make_network([5, 5, 5], [(0, 1), (1, 2)])
        got = list(enumerate_monomorphisms(3, [(0, 1), (1, 2), (0, 2)], path))
        assert got == []

    def test_monomorphism_allows_extra_host_links(self):
        # pattern path 0-1-2 embeds into K3 even though the images carry an
        # extra link; induced mode rejects exactly those embeddings
        k3 = make_network([5, 5, 5], [(0, 1), (0, 2), (1, 2)])
        loose = list(enumerate_monomorphisms(3, [(0, 1), (1, 2)], k3))
        strict = list(enumerate_monomorphisms(3, [(0, 1), (1, 2)], k3, induced=True))
        assert len(loose) == 6
        assert strict == []

    def test_disconnected_pattern_rejected(self):
        host = make_network([5, 5], [(0, 1)])
        with pytest.raises(ValueError, match="connected"):
            list(enumerate_monomorphisms(2, [], host))


class TestOracleEquivalence:
    def test_matches_brute_force_on_random_instances(self):
        rng = random.Random(42)
        for _ in range(300):
            n_pat = rng.randint(1, 4)
            n_host = rng.randint(1, 6)
            host_links = {
                (a, b)
                for a in range(n_host)
                for b in range(a + 1, n_host)
                if rng.random() < 0.5
            }
            host = make_network([rng.randint(1, 9) for _ in range(n_host)], host_links)
            pat_edges = set()
            for i in range(1, n_pat):
                pat_edges.add((rng.randrange(i), i))
            for i in range(n_pat):
                for j in range(i + 1, n_pat):
                    if rng.random() < 0.3:
                        pat_edges.add((i, j))
            induced = rng.random() < 0.3
            caps = [rng.randint(1, 9) for _ in range(n_pat)] if rng.random() < 0.5 else None
            got = list(
                enumerate_monomorphisms(n_pat, pat_edges, host, min_qubits=caps, induced=induced)
            )
            expected = brute_force_monomorphisms(n_pat, pat_edges, host, caps, induced)
            key = lambda m: tuple(sorted(m.items()))
            assert sorted(map(key, got)) == sorted(map(key, expected))
            assert len(got) == len(expected)  # exhaustive, no duplicates

    def test_no_duplicates_and_injective(self):
        rng = random.Random(1)
        for _ in range(50):
            wf, network = random_small_instance(rng)
            seen = set()
            for m in workflow_monomorphisms(wf, network, prune_by_qubits=False):
                key = tuple(sorted(m.items()))
                assert key not in seen
                seen.add(key)
                assert len(set(m.values())) == len(m)


class TestDeterminism:
    def test_two_runs_identical_sequence(self):
        rng = random.Random(9)
        for _ in range(25):
            wf, network = random_small_instance(rng)
            first = list(workflow_monomorphisms(wf, network))
            second = list(workflow_monomorphisms(wf, network))
            assert first == second

    def test_pattern_order_highest_degree_root_then_bfs(self):
        # star: vertex 1 has degree 3
        order = pattern_order(4, [(0, 1), (1, 2), (1, 3)])
        assert order[0] == 1
        assert sorted(order) == [0, 1, 2, 3]
        # chain: middle vertex of a 3-chain has degree 2
        assert pattern_order(3, [(0, 1), (1, 2)])[0] == 1


class TestMappingFeasible:
    def test_enumerated_mappings_pass_adjacency_by_construction(self):
        rng = random.Random(5)
        for _ in range(30):
            wf, network = random_small_instance(rng)
            for m in itertools.islice(workflow_monomorphisms(wf, network), 20):
                assert mapping_feasible(m, wf, network)

    def test_qubit_violation_detected(self):
        wf = chain_workflow([140, 5])
        net = make_network([133, 133], [(0, 1)])
        assert not mapping_feasible({0: 0, 1: 1}, wf, net)

    def test_capacious_tasks_fit_all_published_machines(self, profiles):
        assert all(5 <= p["qubits"] for p in profiles.values())

    def test_in_search_pruning_preserves_feasible_set(self):
        rng = random.Random(17)
        for _ in range(60):
            wf, network = random_small_instance(rng)
            pruned = [
                tuple(sorted(m.items())) for m in workflow_monomorphisms(wf, network)
            ]
            unpruned_feasible = [
                tuple(sorted(m.items()))
                for m in workflow_monomorphisms(wf, network, prune_by_qubits=False)
                if mapping_feasible(m, wf, network)
            ]
            assert sorted(pruned) == sorted(unpruned_feasible)
