"""
Management command to compute an exact minimum cut on a small instance.
"""

from mwcut.core import DirectedInstance, serialize_cut
from mwcut.exceptions import InstanceError
from mwcut.management.base import MwcutCommand
from mwcut.oracle import exact_min_dirmc, exact_min_nodemc, exact_one_way_cut


class Command(MwcutCommand):
    """Run the exact branch-and-bound oracle."""

    help = "Compute an exact minimum multiway cut (small instances only)"

    def add_arguments(self, parser):
        """Add command arguments."""
        self.add_input_argument(parser)
        parser.add_argument(
            "--one-way",
            action="store_true",
            help="Only cut paths from the first terminal to the second",
        )
        parser.add_argument("--out", default=None, help="Cut file")
        self.add_json_argument(parser)

    def run(self, **options):
        inst = self.read_instance(options["input"])
        directed = isinstance(inst, DirectedInstance)
        if options["one_way"]:
            if not directed:
                raise InstanceError("--one-way needs a directed instance")
            source, target = inst.terminals[:2]
            cut = exact_one_way_cut(inst, source, target)
        elif directed:
            cut = exact_min_dirmc(inst)
        else:
            cut = exact_min_nodemc(inst)
        if options["out"]:
            self.write_artifact(serialize_cut(cut, inst), options["out"])
        self.write_report(
            {
                "cut_cost": cut.cost,
                "cut_size": len(cut.members),
                "method": cut.meta["method"],
            },
            options["json"],
        )
