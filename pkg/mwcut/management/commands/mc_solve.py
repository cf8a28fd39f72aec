"""
Management command running the whole pipeline: LP, then rounding.
"""

import logging
import time

from mwcut.core import DirectedInstance, canonicalize_node_instance, serialize_cut
from mwcut.dirround import round_deterministic, round_randomized
from mwcut.exceptions import InstanceError
from mwcut.lp import solve_lp_mwu, solve_node_lp
from mwcut.management.base import MwcutCommand
from mwcut.noderound import round_node_deterministic, round_node_randomized
from mwcut.reports import cut_fields

logger = logging.getLogger(__name__)


class Command(MwcutCommand):
    """Solve the LP relaxation and round it into a multiway cut."""

    help = "Approximate a minimum multiway cut by LP rounding"

    def add_arguments(self, parser):
        """Add command arguments."""
        self.add_input_argument(parser)
        parser.add_argument("--epsilon", type=float, default=None)
        parser.add_argument("--seed", type=int, default=None)
        parser.add_argument("--deterministic", action="store_true")
        parser.add_argument(
            "--mode", choices=["auto", "dirmc", "nodemc"], default="auto"
        )
        parser.add_argument("--out", default=None, help="Cut file")
        self.add_json_argument(parser)

    def run(self, **options):
        inst = self.read_instance(options["input"])
        directed = isinstance(inst, DirectedInstance)
        mode = options["mode"]
        if mode != "auto" and (mode == "dirmc") != directed:
            raise InstanceError(f"--mode {mode} does not match the instance file")

        started = time.perf_counter()
        if directed:
            result = solve_lp_mwu(inst, options["epsilon"])
        else:
            inst = canonicalize_node_instance(inst)
            result = solve_node_lp(inst, options["epsilon"])
        time_lp = time.perf_counter() - started

        started = time.perf_counter()
        x = result.solution
        if options["deterministic"]:
            if directed:
                cut = round_deterministic(inst, x)
            else:
                cut = round_node_deterministic(inst, x)
        elif directed:
            cut = round_randomized(inst, x, options["seed"])
        else:
            cut = round_node_randomized(inst, x, options["seed"])
        time_round = time.perf_counter() - started
        logger.info("Rounded to cost %s in %.3fs", cut.cost, time_round)

        if options["out"]:
            self.write_artifact(serialize_cut(cut, inst), options["out"])
        fields = cut_fields(cut, result.primal_cost)
        fields = {
            "lp_cost": fields.pop("lp_cost"),
            "dual_flow_value": result.dual_flow_value,
            **fields,
            "epsilon": result.epsilon,
            "iterations": result.iterations,
            "time_lp": time_lp,
            "time_round": time_round,
        }
        self.write_report(fields, options["json"])
