"""
``mwcut`` console entry point.

Boots a minimal Django configuration when none is present and dispatches
``mwcut <sub> ...`` to the management command ``mc_<sub>``.
"""

import sys

import django
from django.conf import settings
from django.core.management import load_command_class

SUBCOMMANDS = ("solve", "gen", "lp", "round", "oracle", "verify", "reduce", "stats")

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {"plain": {"format": "%(levelname)s %(name)s: %(message)s"}},
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "stream": "ext://sys.stderr",
            "formatter": "plain",
        }
    },
    "loggers": {"mwcut": {"handlers": ["console"], "level": "WARNING"}},
}


def configure():
    """Configure Django for standalone use unless a project already did."""
    if not settings.configured:
        settings.configure(INSTALLED_APPS=["mwcut"], LOGGING=LOGGING)
    django.setup()


def usage() -> str:
    return "usage: mwcut {%s} [options]\n" % ",".join(SUBCOMMANDS)


def main(argv=None) -> int:
    argv = list(sys.argv if argv is None else argv)
    if len(argv) < 2 or argv[1] in ("-h", "--help"):
        sys.stdout.write(usage())
        return 0 if len(argv) >= 2 else 1
    sub = argv[1]
    if sub not in SUBCOMMANDS:
        sys.stderr.write(f"mwcut: unknown command {sub!r}\n" + usage())
        return 1
    configure()
    command = load_command_class("mwcut", f"mc_{sub}")
    try:
        command.run_from_argv(["mwcut", f"mc_{sub}", *argv[2:]])
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
