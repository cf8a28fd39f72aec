"""
Management command printing closed-form family statistics.
"""

from dataclasses import asdict

from mwcut.families import fractionality_stats, gap_family_stats
from mwcut.management.base import MwcutCommand


class Command(MwcutCommand):
    """Report closed-form and recurrence statistics of an instance family."""

    help = "Print reference statistics of the gap or fractionality family"

    def add_arguments(self, parser):
        """Add command arguments."""
        parser.add_argument("family", choices=["gap", "frac"])
        parser.add_argument("--level", type=int, default=0, help="Gap family level i")
        parser.add_argument(
            "--h", type=int, default=2, help="Fractionality family size h"
        )
        self.add_json_argument(parser)

    def run(self, **options):
        if options["family"] == "gap":
            stats = gap_family_stats(options["level"])
        else:
            stats = fractionality_stats(options["h"])
        self.write_report(asdict(stats), options["json"])
