"""
Management command to solve the distance LP relaxation.
"""

import time

from mwcut.core import DirectedInstance, canonicalize_node_instance, serialize_solution
from mwcut.lp import solve_lp_mwu, solve_node_lp
from mwcut.management.base import MwcutCommand


class Command(MwcutCommand):
    """Approximately solve the LP and write the fractional solution."""

    help = "Solve the distance LP relaxation with the MWU flow solver"

    def add_arguments(self, parser):
        """Add command arguments."""
        self.add_input_argument(parser)
        parser.add_argument("--epsilon", type=float, default=None)
        parser.add_argument("--out", default=None, help="Solution file")
        self.add_json_argument(parser)

    def run(self, **options):
        inst = self.read_instance(options["input"])
        started = time.perf_counter()
        if isinstance(inst, DirectedInstance):
            result = solve_lp_mwu(inst, options["epsilon"])
        else:
            inst = canonicalize_node_instance(inst)
            result = solve_node_lp(inst, options["epsilon"])
        elapsed = time.perf_counter() - started
        if options["out"]:
            self.write_artifact(
                serialize_solution(result.solution, inst), options["out"]
            )
        self.write_report(
            {
                "lp_cost": result.primal_cost,
                "dual_flow_value": result.dual_flow_value,
                "epsilon": result.epsilon,
                "iterations": result.iterations,
                "time_lp": elapsed,
            },
            options["json"],
        )
