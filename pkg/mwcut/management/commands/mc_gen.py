"""
Management command to generate instances.
"""

from mwcut.core import resolve_seed, serialize_instance, serialize_solution
from mwcut.families import (
    fractionality_solution,
    gap_family_solution,
    gen_fractionality_family,
    gen_gap_family,
    gen_random_instance,
)
from mwcut.management.base import MwcutCommand


class Command(MwcutCommand):
    """Write a gap-family, fractionality-family or random instance."""

    help = "Generate a multiway cut instance file"

    def add_arguments(self, parser):
        """Add command arguments."""
        parser.add_argument("family", choices=["gap", "frac", "random"])
        parser.add_argument("--level", type=int, default=0, help="Gap family level i")
        parser.add_argument(
            "--h", type=int, default=2, help="Fractionality family size h"
        )
        parser.add_argument(
            "--n", type=int, default=8, help="Random instance node count"
        )
        parser.add_argument(
            "--density", type=float, default=0.3, help="Random arc density"
        )
        parser.add_argument("--k", type=int, default=3, help="Random terminal count")
        parser.add_argument("--min-weight", type=int, default=1)
        parser.add_argument("--max-weight", type=int, default=10)
        parser.add_argument("--seed", type=int, default=None)
        parser.add_argument("--mode", choices=["dirmc", "nodemc"], default="dirmc")
        parser.add_argument(
            "--out", default=None, help="Instance file (default stdout)"
        )
        parser.add_argument(
            "--solution-out",
            default=None,
            help="Also write the reference fractional solution (gap and frac only)",
        )

    def run(self, **options):
        family = options["family"]
        solution = None
        trailer = ""
        if family == "gap":
            inst = gen_gap_family(options["level"])
            if options["solution_out"]:
                solution = gap_family_solution(options["level"])
        elif family == "frac":
            inst = gen_fractionality_family(options["h"])
            if options["solution_out"]:
                solution = fractionality_solution(options["h"])
        else:
            seed = resolve_seed(options["seed"])
            trailer = f"# seed {seed}\n"
            inst = gen_random_instance(
                options["n"],
                options["density"],
                options["k"],
                weight_range=(options["min_weight"], options["max_weight"]),
                seed=seed,
                mode=options["mode"],
            )
        self.write_artifact(serialize_instance(inst) + trailer, options["out"])
        if solution is not None:
            self.write_artifact(
                serialize_solution(solution, inst), options["solution_out"]
            )
