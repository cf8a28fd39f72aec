"""
Management command to apply a reduction to a node-weighted instance.
"""

from mwcut.core import NodeInstance, canonicalize_node_instance, serialize_instance
from mwcut.exceptions import InstanceError
from mwcut.management.base import MwcutCommand
from mwcut.reductions import node_split_reduction, reduce_4terminal_to_stbicut


class Command(MwcutCommand):
    """Write the directed instance produced by a reduction."""

    help = "Reduce a node-weighted instance to a directed edge-weighted one"

    def add_arguments(self, parser):
        """Add command arguments."""
        self.add_input_argument(parser)
        parser.add_argument("--kind", choices=["nodesplit", "stbicut4"], required=True)
        parser.add_argument(
            "--out", default=None, help="Output instance (default stdout)"
        )

    def run(self, **options):
        inst = self.read_instance(options["input"])
        if not isinstance(inst, NodeInstance):
            raise InstanceError("reductions take a node-weighted instance")
        if options["kind"] == "nodesplit":
            split = node_split_reduction(canonicalize_node_instance(inst))
        else:
            split = reduce_4terminal_to_stbicut(inst).to_directed()
        self.write_artifact(serialize_instance(split.instance), options["out"])
