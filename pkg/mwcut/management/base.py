"""
Shared plumbing for the mc_* management commands.
"""

import logging
import sys

from django.core.management.base import BaseCommand, CommandError

from mwcut.core import Instance, parse_instance
from mwcut.exceptions import MultiwayCutError
from mwcut.reports import render_report

STDIO = "-"

VERBOSITY_LEVELS = {
    0: logging.ERROR,
    1: logging.WARNING,
    2: logging.INFO,
    3: logging.DEBUG,
}


class MwcutCommand(BaseCommand):
    """
    Base class translating mwcut errors into exit codes.

    Subclasses implement ``run(**options)``. ``stdin`` may be passed to
    ``call_command`` to feed ``--input -``.
    """

    stealth_options = ("stdin",)

    def create_parser(self, prog_name, subcommand, **kwargs):
        parser = super().create_parser(prog_name, subcommand, **kwargs)
        if getattr(self, "_called_from_command_line", False):
            # usage errors are input errors: exit 1, keep 2 for solver guards
            def usage_error(message):
                parser.print_usage(sys.stderr)
                parser.exit(1, f"{parser.prog}: error: {message}\n")

            parser.error = usage_error
        return parser

    def add_input_argument(self, parser, required=True):
        parser.add_argument(
            "--input",
            required=required,
            help="Instance file, or - for standard input",
        )

    def add_json_argument(self, parser):
        parser.add_argument(
            "--json",
            action="store_true",
            help="Print the report as one JSON object",
        )

    def handle(self, *args, **options):
        """Execute the command."""
        self._stdin = options.get("stdin") or sys.stdin
        logging.getLogger("mwcut").setLevel(
            VERBOSITY_LEVELS.get(options.get("verbosity", 1), logging.DEBUG)
        )
        try:
            self.run(**options)
        except MultiwayCutError as e:
            raise CommandError(str(e), returncode=e.exit_code) from e
        except OSError as e:
            raise CommandError(f"I/O error: {e}", returncode=1) from e

    def run(self, **options):
        raise NotImplementedError

    def read_text(self, path: str) -> str:
        if path == STDIO:
            return self._stdin.read()
        with open(path, encoding="utf-8") as handle:
            return handle.read()

    def read_instance(self, path: str) -> Instance:
        return parse_instance(self.read_text(path))

    def write_artifact(self, text: str, path=None):
        """Write a file artifact, or to standard output without a path."""
        if path is None or path == STDIO:
            self.stdout.write(text, ending="")
            return
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)

    def write_report(self, fields, as_json=False):
        self.stdout.write(render_report(fields, as_json), ending="")
