"""
Management command to round a fractional solution.
"""

import time

import numpy as np

from mwcut.core import (
    DirectedInstance,
    canonicalize_node_instance,
    parse_solution,
    serialize_cut,
)
from mwcut.dirround import (
    round_at_theta,
    round_deterministic,
    round_randomized,
    run_trials,
)
from mwcut.lp import lp_cost
from mwcut.management.base import MwcutCommand
from mwcut.noderound import (
    round_node_at,
    round_node_deterministic,
    round_node_randomized,
    run_node_trials,
)
from mwcut.reports import cut_fields


class Command(MwcutCommand):
    """Round a fractional solution at a fixed theta, deterministically or at random."""

    help = "Round a fractional solution into a multiway cut"

    def add_arguments(self, parser):
        """Add command arguments."""
        self.add_input_argument(parser)
        parser.add_argument("--x", required=True, help="Fractional solution file")
        group = parser.add_mutually_exclusive_group()
        group.add_argument("--theta", type=float, default=None, help="Fixed radius")
        group.add_argument("--deterministic", action="store_true")
        group.add_argument(
            "--trials", type=int, default=None, help="Monte Carlo trials"
        )
        parser.add_argument("--seed", type=int, default=None)
        parser.add_argument(
            "--ell", type=int, default=1, help="Skipped terminal (1-based) with --theta"
        )
        parser.add_argument("--out", default=None, help="Cut file")
        self.add_json_argument(parser)

    def run(self, **options):
        inst = self.read_instance(options["input"])
        directed = isinstance(inst, DirectedInstance)
        if not directed:
            inst = canonicalize_node_instance(inst)
        x = parse_solution(self.read_text(options["x"]), inst)
        started = time.perf_counter()
        extra = {}
        if options["trials"] is not None:
            runner = run_trials if directed else run_node_trials
            cuts = runner(inst, x, options["trials"], options["seed"])
            costs = np.array([c.cost for c in cuts])
            cut = cuts[int(np.argmin(costs))]
            extra = {
                "trials": len(cuts),
                "mean_cut_cost": float(costs.mean()),
                "max_cut_cost": float(costs.max()),
            }
        elif options["theta"] is not None:
            if directed:
                cut = round_at_theta(inst, x, options["theta"])
            else:
                cut = round_node_at(inst, x, options["ell"] - 1, options["theta"])
        elif options["deterministic"]:
            if directed:
                cut = round_deterministic(inst, x)
            else:
                cut = round_node_deterministic(inst, x)
        elif directed:
            cut = round_randomized(inst, x, options["seed"])
        else:
            cut = round_node_randomized(inst, x, options["seed"])
        elapsed = time.perf_counter() - started
        if options["out"]:
            self.write_artifact(serialize_cut(cut, inst), options["out"])
        fields = cut_fields(cut, lp_cost(inst, x))
        fields.update(extra)
        fields["time_round"] = elapsed
        self.write_report(fields, options["json"])
