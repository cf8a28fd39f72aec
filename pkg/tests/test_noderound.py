"""
Tests for node-weighted rounding.
"""

import math

import numpy as np
import pytest
from django.test import SimpleTestCase

from mwcut.core import CutSolution, NodeInstance, node_solution
from mwcut.dirround import cut_frequencies
from mwcut.exceptions import InfeasibleSolutionError, InstanceError, InvalidCutError
from mwcut.families import gen_random_instance
from mwcut.lp import lp_cost, scale_to_feasible, solve_node_lp
from mwcut.noderound import (
    boundary,
    literal_node_cut,
    node_sssp,
    round_node_at,
    round_node_deterministic,
    round_node_randomized,
    run_node_trials,
    verify_node_cut,
)
from mwcut.paths import h_nearest_terminals, min_interterminal_distance, sssp
from mwcut.reductions import node_split_reduction
from tests.instances import node_path, node_path_solution, star, star_solution

THETA_GRID = np.linspace(0.005, 0.495, 99)
MONTE_CARLO_TRIALS = 50000


def random_node_case(seed, n=10, density=0.35, k=3):
    inst = gen_random_instance(n, density, k, seed=seed, mode="nodemc")
    rng = np.random.default_rng(seed)
    values = rng.random(inst.n) + 0.05
    values[list(inst.terminals)] = 0.0
    return inst, scale_to_feasible(inst, values)


def lp_case(seed):
    """Seeded node instance with its MWU solution."""
    inst = gen_random_instance(14, 0.3, 2 + seed % 5, seed=seed, mode="nodemc")
    return inst, solve_node_lp(inst, 0.05).solution


def adjacency_boundary(inst, x, source, r):
    """Nodes outside B(source, r) with a neighbour inside it."""
    dist = node_sssp(inst, x, source).dist
    inside = {v for v in range(inst.n) if dist[v] <= r}
    return {
        v
        for v in range(inst.n)
        if v not in inside and set(inst.neighbors[v]) & inside
    }


class NodeSsspTestCase(SimpleTestCase):
    """Tests for node_sssp."""

    def test_path(self):
        """Test path."""
        table = node_sssp(node_path(), node_path_solution(), 0)
        self.assertEqual(table.dist[2], 1.0)
        self.assertEqual(table.dist[0], 0.0)

    def test_star(self):
        """Test star."""
        self.assertEqual(node_sssp(star(), star_solution(), 0).dist[1], 1.0)

    def test_matches_node_split(self):
        """Test matches node split."""
        for seed in range(5):
            inst, x = random_node_case(seed)
            split = node_split_reduction(inst)
            arc_lengths = [0.0] * split.instance.m
            for v, a in split.node_arc.items():
                arc_lengths[a] = x.values[v]
            for s in inst.terminals:
                direct = node_sssp(inst, x, s).dist
                via_split = sssp(split.instance, arc_lengths, s).dist
                for v in range(inst.n):
                    self.assertAlmostEqual(direct[v], via_split[split.out_node[v]])

    def test_triangle_consistency(self):
        """Test triangle consistency."""
        inst, x = random_node_case(3)
        dist = node_sssp(inst, x, inst.terminals[0]).dist
        for u, v in inst.edges:
            self.assertLessEqual(dist[v], dist[u] + x.values[v] + 1e-12)
            self.assertLessEqual(dist[u], dist[v] + x.values[u] + 1e-12)


class BoundaryTestCase(SimpleTestCase):
    """Tests for boundary."""

    def test_star(self):
        """Test star."""
        self.assertEqual(
            boundary(star(), star_solution(), 0, 0.3).members, frozenset({3})
        )

    def test_path(self):
        """Test path."""
        self.assertEqual(
            boundary(node_path(), node_path_solution(), 0, 0.4).members, frozenset({1})
        )

    def test_large_radius(self):
        """Test large radius."""
        self.assertEqual(boundary(star(), star_solution(), 0, 5.0).members, frozenset())

    def test_matches_adjacency_definition(self):
        """Test matches adjacency definition."""
        for seed in range(6):
            inst, x = random_node_case(seed)
            for s in inst.terminals:
                for r in (0.1, 0.25, 0.4, 0.7):
                    self.assertEqual(
                        set(boundary(inst, x, s, r).members),
                        adjacency_boundary(inst, x, s, r),
                    )

    def test_negative_radius(self):
        """Test negative radius."""
        with self.assertRaises(InstanceError):
            boundary(star(), star_solution(), 0, -0.1)


class RoundNodeAtTestCase(SimpleTestCase):
    """Tests for round_node_at and literal_node_cut."""

    def test_star_any_parameters(self):
        """Test star any parameters."""
        for ell in range(3):
            for theta in (0.1, 0.3, 0.49):
                cut = round_node_at(star(), star_solution(), ell, theta)
                self.assertEqual(cut.members, frozenset({3}))

    def test_path_skipping_second_terminal(self):
        """Test path skipping second terminal."""
        for theta in (0.1, 0.3, 0.49):
            cut = round_node_at(node_path(), node_path_solution(), 1, theta)
            self.assertEqual(cut.members, frozenset({1}))
            self.assertEqual(cut.cost, 1.0)

    def test_matches_literal_union_and_is_feasible(self):
        """Test matches literal union and is feasible."""
        for seed in range(8):
            inst, x = random_node_case(seed, k=2 + seed % 4)
            for ell in range(inst.k):
                for theta in THETA_GRID[::9]:
                    cut = round_node_at(inst, x, ell, theta)
                    radius = cut.meta["theta"]
                    self.assertEqual(cut, literal_node_cut(inst, x, ell, radius))
                    self.assertTrue(verify_node_cut(inst, cut))

    def test_parameter_ranges(self):
        """Test parameter ranges."""
        with self.assertRaises(InstanceError):
            round_node_at(star(), star_solution(), 3, 0.2)
        with self.assertRaises(InstanceError):
            round_node_at(star(), star_solution(), 0, 0.5)

    def test_infeasible(self):
        """Test infeasible."""
        with self.assertRaises(InfeasibleSolutionError):
            round_node_at(star(), node_solution([0, 0, 0, 0.5]), 0, 0.2)

    def test_lp_solutions_match_literal_union(self):
        """Test lp solutions match literal union."""
        for seed in range(10):
            inst, x = lp_case(seed)
            for ell in range(inst.k):
                for theta in THETA_GRID[::11]:
                    cut = round_node_at(inst, x, ell, theta)
                    radius = cut.meta["theta"]
                    self.assertEqual(cut, literal_node_cut(inst, x, ell, radius))
                    self.assertTrue(verify_node_cut(inst, cut), (seed, ell, theta))


class RoundNodeRandomizedTestCase(SimpleTestCase):
    """Tests for round_node_randomized."""

    def test_star(self):
        """Test star."""
        for seed in range(10):
            cut = round_node_randomized(star(), star_solution(), seed)
            self.assertEqual(cut.members, frozenset({3}))
            self.assertIn(cut.meta["ell"], (0, 1, 2))
            self.assertTrue(0 < cut.meta["theta"] < 0.5)

    def test_reproducible(self):
        """Test reproducible."""
        inst, x = random_node_case(1)
        self.assertEqual(
            round_node_randomized(inst, x, 9), round_node_randomized(inst, x, 9)
        )

    def test_missing_seed_is_recorded(self):
        """Test missing seed is recorded."""
        inst, x = random_node_case(1)
        cut = round_node_randomized(inst, x)
        self.assertIsInstance(cut.meta["seed"], int)
        replay = round_node_randomized(inst, x, cut.meta["seed"])
        self.assertEqual(replay, cut)
        self.assertEqual(replay.meta["theta"], cut.meta["theta"])

    def test_feasible_with_lp_solutions(self):
        """Test feasible with lp solutions."""
        for seed in range(10):
            inst, x = lp_case(seed)
            table = h_nearest_terminals(inst, x, 2)
            limit = 0.5 * min(1.0, min_interterminal_distance(inst, x))
            for trial in range(20):
                cut = round_node_randomized(inst, x, seed, table=table, trial=trial)
                self.assertLess(cut.meta["theta"], limit)
                self.assertTrue(verify_node_cut(inst, cut))

    @pytest.mark.slow
    def test_monte_carlo_bound(self):
        """Test monte carlo bound."""
        trials = MONTE_CARLO_TRIALS
        for case in range(5):
            with self.subTest(case=case):
                inst, x = random_node_case(4 + case, n=12, k=3 + case % 3)
                cuts = run_node_trials(inst, x, trials, seed=77 + case)
                factor = 2 * (1 - 1 / inst.k)
                frequency = cut_frequencies(cuts, inst.n)
                for v, value in enumerate(x.values):
                    self.assertLessEqual(
                        frequency[v], factor * value + 4 * math.sqrt(value / trials)
                    )
                mean = np.mean([cut.cost for cut in cuts])
                self.assertLessEqual(mean, factor * lp_cost(inst, x) * 1.02)

    def test_trials_independent_of_workers(self):
        """Test trials independent of workers."""
        inst, x = random_node_case(2)
        self.assertEqual(
            run_node_trials(inst, x, 30, seed=5, workers=1),
            run_node_trials(inst, x, 30, seed=5, workers=3),
        )


class RoundNodeDeterministicTestCase(SimpleTestCase):
    """Tests for round_node_deterministic."""

    def test_star(self):
        """Test star."""
        self.assertEqual(round_node_deterministic(star(), star_solution()).cost, 1.0)

    def test_path_meets_bound(self):
        """Test path meets bound."""
        cut = round_node_deterministic(node_path(), node_path_solution())
        self.assertEqual(cut.cost, 1.0)

    def test_guarantee_on_random_instances(self):
        """Test guarantee on random instances."""
        for seed in range(200):
            k = 2 + seed % 5
            inst, x = random_node_case(seed, n=12, k=k)
            cut = round_node_deterministic(inst, x)
            self.assertTrue(verify_node_cut(inst, cut))
            self.assertLessEqual(cut.cost, 2 * (1 - 1 / k) * lp_cost(inst, x))

    def test_guarantee_with_lp_solutions(self):
        """Test guarantee with lp solutions."""
        for seed in range(20):
            inst, x = lp_case(seed)
            cut = round_node_deterministic(inst, x)
            self.assertTrue(verify_node_cut(inst, cut), seed)
            self.assertLessEqual(cut.cost, 2 * (1 - 1 / inst.k) * lp_cost(inst, x))

    @pytest.mark.slow
    def test_guarantee_with_lp_solutions_at_scale(self):
        """Test guarantee with lp solutions at scale."""
        for seed in range(200):
            inst, x = lp_case(seed)
            cut = round_node_deterministic(inst, x)
            self.assertTrue(verify_node_cut(inst, cut), seed)
            self.assertLessEqual(cut.cost, 2 * (1 - 1 / inst.k) * lp_cost(inst, x))

    def test_sweep_intervals_meet_on_tight_paths(self):
        """Test sweep intervals meet on tight paths."""
        inst = node_path()
        x = node_solution([0.0, 0.1, 0.9 - 1e-12, 0.0])
        cut = round_node_deterministic(inst, x)
        self.assertTrue(verify_node_cut(inst, cut))
        self.assertLess(cut.meta["theta"], 0.5 * min_interterminal_distance(inst, x))

    def test_matches_brute_force(self):
        """Test matches brute force."""
        for seed in range(10):
            inst, x = random_node_case(seed, n=8, k=3)
            cut = round_node_deterministic(inst, x)
            brute = min(
                round_node_at(inst, x, ell, theta).cost
                for ell in range(inst.k)
                for theta in self.candidate_thetas(inst, x)
            )
            self.assertAlmostEqual(cut.cost, brute)

    def candidate_thetas(self, inst, x):
        points = {0.0, 0.5}
        for s in inst.terminals:
            dist = node_sssp(inst, x, s).dist
            for v in range(inst.n):
                if dist[v] < math.inf:
                    points.update((dist[v], dist[v] - x.values[v]))
        points = np.array(sorted(p for p in points if 0 <= p <= 0.5))
        middles = (points[:-1] + points[1:]) / 2
        grid = np.linspace(0.005, 0.495, 50)
        return [t for t in np.concatenate([points, middles, grid]) if 0 < t < 0.5]


class VerifyNodeCutTestCase(SimpleTestCase):
    """Tests for verify_node_cut."""

    def test_empty_cut_on_star(self):
        """Test empty cut on star."""
        verdict = verify_node_cut(star(), CutSolution("node", frozenset(), 0.0))
        self.assertFalse(verdict)
        self.assertEqual(verdict.path, (0, 3, 1))

    def test_center_cut(self):
        """Test center cut."""
        cut = CutSolution("node", frozenset({3}), 1.0)
        self.assertTrue(verify_node_cut(star(), cut))

    def test_terminal_in_cut(self):
        """Test terminal in cut."""
        with self.assertRaises(InvalidCutError):
            verify_node_cut(star(), CutSolution("node", frozenset({0}), 0.0))

    def test_infinite_node_in_cut(self):
        """Test infinite node in cut."""
        inst = NodeInstance(
            n=3,
            edges=((0, 1), (1, 2)),
            weights=(1.0, float("inf"), 1.0),
            terminals=(0, 2),
        )
        with self.assertRaises(InvalidCutError):
            verify_node_cut(inst, CutSolution("node", frozenset({1}), 0.0))
