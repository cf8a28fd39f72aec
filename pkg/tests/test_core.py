"""
Tests for the data model and file formats.
"""

import math

from django.test import SimpleTestCase

from mwcut.core import (
    INF,
    Arc,
    DirectedInstance,
    NodeInstance,
    canonicalize_node_instance,
    edge_solution,
    format_number,
    make_edge_cut,
    make_node_cut,
    make_rng,
    draw_unit,
    parse_cut,
    parse_instance,
    parse_solution,
    resolve_seed,
    serialize_cut,
    serialize_instance,
    serialize_solution,
)
from mwcut.exceptions import InstanceError, InstanceFormatError, InvalidCutError
from mwcut.families import gen_fractionality_family, gen_gap_family, gen_random_instance
from tests.instances import star, two_cycle

SMALLEST = "p dirmc 2 2 2\nt 1\nt 2\na 1 2 1\na 2 1 1\n"


class ParseInstanceTestCase(SimpleTestCase):
    """Tests for parse_instance."""

    def test_smallest_directed_instance(self):
        """Test smallest directed instance."""
        inst = parse_instance(SMALLEST)
        self.assertIsInstance(inst, DirectedInstance)
        self.assertEqual(inst.n, 2)
        self.assertEqual(inst.m, 2)
        self.assertEqual(inst.terminals, (0, 1))
        self.assertEqual(inst.arcs[0], Arc(0, 1, 1.0))

    def test_self_loop_reports_line(self):
        """Test self loop reports line."""
        text = SMALLEST.replace("a 2 1 1", "a 1 1 1")
        with self.assertRaises(InstanceFormatError) as ctx:
            parse_instance(text)
        self.assertEqual(ctx.exception.line, 5)
        self.assertIn("self-loop", str(ctx.exception))

    def test_comments_and_blank_lines_ignored(self):
        """Test comments and blank lines ignored."""
        text = "# header\n\np dirmc 2 1 2  # counts\nt 1\nt 2\na 1 2 inf\n"
        inst = parse_instance(text)
        self.assertEqual(inst.arcs[0].weight, INF)

    def test_node_instance(self):
        """Test node instance."""
        text = "p nodemc 3 2 2\nt 1\nt 3\nn 1 inf\nn 2 2.5\nn 3 inf\ne 1 2\ne 2 3\n"
        inst = parse_instance(text)
        self.assertIsInstance(inst, NodeInstance)
        self.assertEqual(inst.weights, (INF, 2.5, INF))
        self.assertEqual(inst.edges, ((0, 1), (1, 2)))

    def test_rejects_bad_records(self):
        """Test rejects bad records."""
        cases = {
            "a 1 2 1\n": 1,
            "p dirmc 2 1 2\nt 1\nt 2\na 1 3 1\n": 4,
            "p dirmc 2 1 2\nt 1\nt 1\na 1 2 1\n": 3,
            "p dirmc 2 1 2\nt 1\nt 2\na 1 2 -1\n": 4,
            "p dirmc 2 1 2\nt 1\nt 2\na 1 2 nan\n": 4,
            "p dirmc 2 1 2\nt 1\nt 2\ne 1 2\n": 4,
        }
        for text, line in cases.items():
            with self.subTest(text=text):
                with self.assertRaises(InstanceFormatError) as ctx:
                    parse_instance(text)
                self.assertEqual(ctx.exception.line, line)

    def test_count_mismatch(self):
        """Test count mismatch."""
        with self.assertRaises(InstanceFormatError):
            parse_instance("p dirmc 2 2 2\nt 1\nt 2\na 1 2 1\n")

    def test_missing_node_weight(self):
        """Test missing node weight."""
        with self.assertRaises(InstanceFormatError) as ctx:
            parse_instance("p nodemc 2 0 2\nt 1\nt 2\nn 1 inf\n")
        self.assertIn("node 2", str(ctx.exception))

    def test_empty_file(self):
        """Test empty file."""
        with self.assertRaises(InstanceFormatError):
            parse_instance("# nothing\n")


class SerializeInstanceTestCase(SimpleTestCase):
    """Tests for serialize_instance."""

    def test_header(self):
        """Test header."""
        inst = DirectedInstance(n=2, arcs=(Arc(0, 1, 1.0),), terminals=(0, 1))
        self.assertIn("p dirmc 2 1 2", serialize_instance(inst))

    def test_star_weight_line(self):
        """Test star weight line."""
        text = serialize_instance(star())
        self.assertIn("n 4 1\n", text)
        self.assertIn("n 1 inf\n", text)

    def test_families_reparse_equal(self):
        """Test families reparse equal."""
        for inst in (gen_fractionality_family(3), gen_gap_family(2)):
            self.assertEqual(parse_instance(serialize_instance(inst)), inst)

    def test_random_instances_reparse_equal(self):
        """Test random instances reparse equal."""
        for mode in ("dirmc", "nodemc"):
            inst = gen_random_instance(8, 0.5, 3, seed=4, mode=mode)
            self.assertEqual(parse_instance(serialize_instance(inst)), inst)

    def test_fractional_weights_keep_their_digits(self):
        """Test fractional weights keep their digits."""
        inst = DirectedInstance(n=2, arcs=(Arc(0, 1, 0.123456789),), terminals=(0, 1))
        self.assertIn("a 1 2 0.123456789", serialize_instance(inst))

    def test_format_number(self):
        """Test format number."""
        self.assertEqual(format_number(INF), "inf")
        self.assertEqual(format_number(3.0), "3")
        self.assertEqual(format_number(0.1), "0.1")


class InstanceValidationTestCase(SimpleTestCase):
    """Tests for instance invariants."""

    def test_one_terminal_rejected(self):
        """Test one terminal rejected."""
        with self.assertRaises(InstanceError):
            DirectedInstance(n=2, arcs=(), terminals=(0,))

    def test_parallel_arcs_allowed(self):
        """Test parallel arcs allowed."""
        inst = DirectedInstance(
            n=2, arcs=(Arc(0, 1, 1.0), Arc(0, 1, 2.0)), terminals=(0, 1)
        )
        self.assertEqual(inst.out_arcs[0], (0, 1))

    def test_node_weight_count(self):
        """Test node weight count."""
        with self.assertRaises(InstanceError):
            NodeInstance(n=2, edges=(), weights=(1.0,), terminals=(0, 1))


class CanonicalizeTestCase(SimpleTestCase):
    """Tests for canonicalize_node_instance."""

    def test_adjacent_terminals_get_dummies(self):
        """Test adjacent terminals get dummies."""
        inst = NodeInstance(
            n=3,
            edges=((0, 1), (1, 2), (0, 2)),
            weights=(1.0, 1.0, 1.0),
            terminals=(0, 1, 2),
        )
        canonical = canonicalize_node_instance(inst)
        self.assertEqual(canonical.terminals, (3, 4, 5))
        self.assertTrue(canonical.is_canonical)
        for s in canonical.terminals:
            self.assertEqual(len(canonical.neighbors[s]), 1)
        self.assertEqual(canonical.weights[:3], (INF, INF, INF))

    def test_canonical_instance_unchanged(self):
        """Test canonical instance unchanged."""
        inst = star()
        self.assertIs(canonicalize_node_instance(inst), inst)

    def test_terminal_weights_become_infinite(self):
        """Test terminal weights become infinite."""
        inst = NodeInstance(
            n=3, edges=((0, 1), (1, 2)), weights=(1.0, 2.0, 1.0), terminals=(0, 2)
        )
        canonical = canonicalize_node_instance(inst)
        self.assertEqual(canonical.weights, (INF, 2.0, INF))
        self.assertEqual(canonical.n, 3)


class CutTestCase(SimpleTestCase):
    """Tests for cut construction and cut files."""

    def test_edge_cut_cost(self):
        """Test edge cut cost."""
        cut = make_edge_cut(two_cycle(3.0, 5.0), [0, 1])
        self.assertEqual(cut.cost, 8.0)

    def test_infinite_arc_rejected(self):
        """Test infinite arc rejected."""
        inst = DirectedInstance(n=2, arcs=(Arc(0, 1, INF),), terminals=(0, 1))
        with self.assertRaises(InvalidCutError):
            make_edge_cut(inst, [0])

    def test_terminal_node_rejected(self):
        """Test terminal node rejected."""
        with self.assertRaises(InvalidCutError):
            make_node_cut(star(), [0])

    def test_cut_file_round_trip(self):
        """Test cut file round trip."""
        inst = two_cycle(3.0, 5.0)
        cut = make_edge_cut(inst, [1])
        text = serialize_cut(cut, inst)
        self.assertEqual(text, "cut a 2 1\ncost 5\n")
        self.assertEqual(parse_cut(text, inst), cut)

    def test_cut_file_parallel_arcs(self):
        """Test cut file parallel arcs."""
        inst = DirectedInstance(
            n=2, arcs=(Arc(0, 1, 1.0), Arc(0, 1, 2.0)), terminals=(0, 1)
        )
        cut = parse_cut("cut a 1 2\ncut a 1 2\ncost 3\n", inst)
        self.assertEqual(cut.members, frozenset({0, 1}))

    def test_cut_file_wrong_cost(self):
        """Test cut file wrong cost."""
        with self.assertRaises(InstanceFormatError) as ctx:
            parse_cut("# two cycle\ncut a 1 2\n\ncost 4\n", two_cycle())
        self.assertEqual(ctx.exception.line, 4)
        self.assertIn("line 4", str(ctx.exception))

    def test_node_cut_file(self):
        """Test node cut file."""
        inst = star()
        cut = parse_cut("cut n 4\ncost 1\n", inst)
        self.assertEqual(cut.members, frozenset({3}))


class SolutionFileTestCase(SimpleTestCase):
    """Tests for fractional solution files."""

    def test_edge_solution_file(self):
        """Test edge solution file."""
        inst = two_cycle()
        x = edge_solution([0.5, 1.0])
        text = serialize_solution(x, inst)
        self.assertEqual(text, "x 1 2 0.5\nx 2 1 1\n")
        self.assertEqual(parse_solution(text, inst), x)

    def test_arc_order_checked(self):
        """Test arc order checked."""
        with self.assertRaises(InstanceFormatError):
            parse_solution("x 2 1 1\nx 1 2 1\n", two_cycle())

    def test_missing_node_value(self):
        """Test missing node value."""
        with self.assertRaises(InstanceFormatError):
            parse_solution("xn 1 0\nxn 4 1\n", star())


class RandomnessTestCase(SimpleTestCase):
    """Tests for seeded generators."""

    def test_trial_generators_are_reproducible(self):
        """Test trial generators are reproducible."""
        self.assertEqual(draw_unit(make_rng(7, 3)), draw_unit(make_rng(7, 3)))
        self.assertNotEqual(draw_unit(make_rng(7, 3)), draw_unit(make_rng(7, 4)))

    def test_given_seed_kept(self):
        """Test given seed kept."""
        self.assertEqual(resolve_seed(0), 0)
        self.assertEqual(resolve_seed(12345), 12345)

    def test_missing_seed_drawn_and_replayable(self):
        """Test missing seed drawn and replayable."""
        seed = resolve_seed(None)
        self.assertIsInstance(seed, int)
        self.assertGreaterEqual(seed, 0)
        self.assertEqual(draw_unit(make_rng(seed, 2)), draw_unit(make_rng(seed, 2)))

    def test_missing_seeds_differ(self):
        """Test missing seeds differ."""
        self.assertNotEqual(resolve_seed(None), resolve_seed(None))

    def test_draw_unit_open_interval(self):
        """Test draw unit open interval."""
        rng = make_rng(1)
        for _ in range(1000):
            value = draw_unit(rng)
            self.assertTrue(0 < value < 1)
            self.assertFalse(math.isnan(value))
