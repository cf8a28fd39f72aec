"""
Management command to check a cut or a fractional solution.
"""

from django.core.management.base import CommandError

from mwcut.core import DirectedInstance, parse_cut, parse_solution
from mwcut.dirround import verify_cut
from mwcut.lp import lp_cost, verify_feasible
from mwcut.management.base import MwcutCommand
from mwcut.noderound import verify_node_cut


class Command(MwcutCommand):
    """Verify a cut file or a fractional solution file against an instance."""

    help = "Verify a multiway cut or a fractional LP solution"

    def add_arguments(self, parser):
        """Add command arguments."""
        self.add_input_argument(parser)
        group = parser.add_mutually_exclusive_group(required=True)
        group.add_argument("--cut", help="Cut file")
        group.add_argument("--x", help="Fractional solution file")
        self.add_json_argument(parser)

    def run(self, **options):
        inst = self.read_instance(options["input"])
        directed = isinstance(inst, DirectedInstance)
        if options["cut"]:
            cut = parse_cut(self.read_text(options["cut"]), inst)
            verdict = verify_cut(inst, cut) if directed else verify_node_cut(inst, cut)
            fields = {"feasible": verdict.feasible, "cut_cost": cut.cost}
            witness = verdict.path
        else:
            x = parse_solution(self.read_text(options["x"]), inst)
            verdict = verify_feasible(inst, x)
            fields = {
                "feasible": verdict.feasible,
                "lp_cost": lp_cost(inst, x),
                "min_distance": verdict.distance,
            }
            witness = verdict.nodes
        fields["witness"] = tuple(v + 1 for v in witness)
        self.write_report(fields, options["json"])
        if not verdict:
            raise CommandError("verification failed", returncode=1)
