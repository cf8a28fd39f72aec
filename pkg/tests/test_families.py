"""
Tests for the instance generators and their reference values.
"""

import math

from django.test import SimpleTestCase, override_settings

from mwcut.core import INF, Arc, DirectedInstance, NodeInstance
from mwcut.exceptions import InstanceError
from mwcut.families import (
    alpha_by_recurrence,
    fractionality_solution,
    fractionality_stats,
    gap_alpha,
    gap_family_flow_value,
    gap_family_size,
    gap_family_solution,
    gap_family_stats,
    gen_fractionality_family,
    gen_gap_family,
    gen_random_instance,
)
from mwcut.lp import lp_cost, verify_feasible
from mwcut.oracle import exact_one_way_cut


class GapFamilyTestCase(SimpleTestCase):
    """Tests for gen_gap_family and its reference solution."""

    def test_sizes(self):
        """Test sizes."""
        expected = {0: (4, 1), 1: (9, 4), 2: (19, 10), 3: (39, 22)}
        for i, (nodes, finite) in expected.items():
            with self.subTest(i=i):
                inst = gen_gap_family(i)
                self.assertEqual(inst.n, nodes)
                self.assertEqual(len(inst.finite_arcs), finite)
                self.assertEqual(gap_family_size(i), (nodes, finite))

    def test_weights_are_unit_or_infinite(self):
        """Test weights are unit or infinite."""
        for arc in gen_gap_family(3).arcs:
            self.assertIn(arc.weight, (1.0, INF))

    def test_base_level(self):
        """Test base level."""
        inst = gen_gap_family(0)
        self.assertEqual(inst.terminals, (0, 3))
        self.assertEqual(inst.finite_arcs, (4,))
        self.assertEqual(inst.arcs[4], Arc(1, 2, 1.0))

    def test_solution_feasible_with_cost(self):
        """Test solution feasible with cost."""
        for i in range(5):
            with self.subTest(i=i):
                inst = gen_gap_family(i)
                x = gap_family_solution(i)
                self.assertTrue(verify_feasible(inst, x, tol=1e-9))
                self.assertAlmostEqual(lp_cost(inst, x), i + 1)

    def test_one_way_cut(self):
        """Test one way cut."""
        for i in range(4):
            inst = gen_gap_family(i)
            s, t = inst.terminals
            self.assertEqual(exact_one_way_cut(inst, s, t).cost, i + 1)

    def test_flow_value(self):
        """Test flow value."""
        for i in range(6):
            self.assertAlmostEqual(gap_family_flow_value(i), i + 1)

    def test_negative_level(self):
        """Test negative level."""
        with self.assertRaises(InstanceError):
            gen_gap_family(-1)

    @override_settings(MWCUT_MAX_FAMILY_NODES=100)
    def test_size_guard(self):
        """Test size guard."""
        self.assertEqual(gen_gap_family(4).n, 79)
        with self.assertRaises(InstanceError):
            gen_gap_family(5)


class GapFamilyStatsTestCase(SimpleTestCase):
    """Tests for gap_family_stats and the alpha recurrence."""

    def test_first_levels(self):
        """Test first levels."""
        first = gap_family_stats(0)
        self.assertEqual(
            (first.alpha, first.two_way_cut, first.lp_opt), (1.0, 1.0, 1.0)
        )
        second = gap_family_stats(1)
        self.assertEqual(second.alpha, 1.5)
        self.assertEqual(second.two_way_cut, 3.0)
        self.assertEqual(second.one_way_cut, 2.0)
        self.assertEqual(second.lp_opt, 2.0)

    def test_recurrence_matches_closed_form(self):
        """Test recurrence matches closed form."""
        for i in range(30):
            self.assertTrue(
                math.isclose(alpha_by_recurrence(i), gap_alpha(i), rel_tol=1e-9)
            )

    def test_alpha_tends_to_two(self):
        """Test alpha tends to two."""
        self.assertGreater(gap_family_stats(999).alpha, 1.998)
        self.assertLess(gap_family_stats(999).alpha, 2.0)

    def test_integrality_gap(self):
        """Test integrality gap."""
        for i in range(6):
            stats = gap_family_stats(i)
            self.assertAlmostEqual(stats.two_way_cut / stats.lp_opt, 2 - 1 / (i + 1))

    def test_no_pair_sum(self):
        """Test no pair sum."""
        self.assertIsNone(gap_family_stats(2).pair_sum)


class FractionalityFamilyTestCase(SimpleTestCase):
    """Tests for gen_fractionality_family."""

    def test_shape(self):
        """Test shape."""
        inst = gen_fractionality_family(5)
        self.assertEqual(inst.n, 12)
        self.assertEqual(inst.terminals, (0, 1))
        self.assertEqual(len(inst.finite_arcs), 8)
        self.assertEqual(inst.m, 8 + 4 + 8)

    def test_reference_solution(self):
        """Test reference solution."""
        for h in (2, 3, 5, 8):
            with self.subTest(h=h):
                inst = gen_fractionality_family(h)
                x = fractionality_solution(h)
                self.assertTrue(verify_feasible(inst, x, tol=1e-9))
                self.assertAlmostEqual(lp_cost(inst, x), 2 * (h - 1) / h)

    def test_stats(self):
        """Test stats."""
        self.assertEqual(fractionality_stats(2).lp_opt, 1.0)
        self.assertEqual(fractionality_stats(2).two_way_cut, 1.0)
        stats = fractionality_stats(4)
        self.assertEqual(stats.lp_opt, 1.5)
        self.assertEqual(stats.pair_sum, 0.5)
        self.assertAlmostEqual(stats.alpha, 2 / 1.5)

    def test_small_h(self):
        """Test small h."""
        with self.assertRaises(InstanceError):
            gen_fractionality_family(1)
        with self.assertRaises(InstanceError):
            fractionality_stats(0)


class RandomInstanceTestCase(SimpleTestCase):
    """Tests for gen_random_instance."""

    def test_seeded_determinism(self):
        """Test seeded determinism."""
        self.assertEqual(
            gen_random_instance(12, 0.3, 3, seed=11),
            gen_random_instance(12, 0.3, 3, seed=11),
        )
        self.assertNotEqual(
            gen_random_instance(12, 0.3, 3, seed=11),
            gen_random_instance(12, 0.3, 3, seed=12),
        )

    def test_directed(self):
        """Test directed."""
        inst = gen_random_instance(12, 0.3, 4, weight_range=(2, 5), seed=1)
        self.assertIsInstance(inst, DirectedInstance)
        self.assertEqual(inst.k, 4)
        self.assertEqual(list(inst.terminals), sorted(inst.terminals))
        for arc in inst.arcs:
            self.assertTrue(2 <= arc.weight <= 5)
            self.assertEqual(arc.weight, int(arc.weight))

    def test_node_mode_is_canonical(self):
        """Test node mode is canonical."""
        for seed in range(5):
            inst = gen_random_instance(10, 0.4, 3, seed=seed, mode="nodemc")
            self.assertIsInstance(inst, NodeInstance)
            self.assertTrue(inst.is_canonical)

    def test_bad_parameters(self):
        """Test bad parameters."""
        cases = [
            dict(n=1, arc_density=0.5, k=2),
            dict(n=5, arc_density=0.5, k=6),
            dict(n=5, arc_density=0.0, k=2),
            dict(n=5, arc_density=0.5, k=2, weight_range=(3, 1)),
            dict(n=5, arc_density=0.5, k=2, mode="other"),
        ]
        for params in cases:
            with self.subTest(params=params):
                with self.assertRaises(InstanceError):
                    gen_random_instance(**params)

    @override_settings(MWCUT_RANDOM_MAX_ATTEMPTS=3)
    def test_attempt_budget(self):
        """Test attempt budget."""
        with self.assertRaises(InstanceError):
            gen_random_instance(30, 0.001, 5, seed=0)
