"""
Settings for mwcut.

These settings can be overridden in a Django project's settings.py file by
prefixing them with 'MWCUT_'. Outside a configured Django project the
defaults apply.

Example:
    MWCUT_EPSILON = 0.02
    MWCUT_THREADS = 4
"""

import os

from django.conf import settings as django_settings


def get_setting(name, default=None):
    """
    Get a setting from Django settings with MWCUT_ prefix.

    Args:
        name: The setting name without prefix.
        default: Default value if setting is not found.

    Returns:
        The setting value or default.
    """
    if not django_settings.configured:
        return default
    return getattr(django_settings, f"MWCUT_{name}", default)


# Default values for settings
DEFAULTS = {
    "EPSILON": 0.05,
    "FEASIBILITY_TOL": 1e-9,
    "DUALITY_SLACK": 1e-6,
    "ITERATION_SLACK": 1000,
    "ORACLE_MAX_ARCS": 26,
    "ORACLE_MAX_NODES": 24,
    "MAX_FAMILY_NODES": 10**7,
    "RANDOM_MAX_ATTEMPTS": 200,
    "THREADS": 1,
}


def get_epsilon():
    """Get the default MWU accuracy."""
    return get_setting("EPSILON", DEFAULTS["EPSILON"])


def get_feasibility_tol():
    """Get the tolerance used when checking distance constraints."""
    return get_setting("FEASIBILITY_TOL", DEFAULTS["FEASIBILITY_TOL"])


def get_duality_slack():
    """Get the relative slack allowed by the weak-duality check."""
    return get_setting("DUALITY_SLACK", DEFAULTS["DUALITY_SLACK"])


def get_iteration_slack():
    """Get the number of iterations added to the MWU cap."""
    return get_setting("ITERATION_SLACK", DEFAULTS["ITERATION_SLACK"])


def get_oracle_max_arcs():
    """Get the finite-arc limit of the directed exact oracle."""
    return get_setting("ORACLE_MAX_ARCS", DEFAULTS["ORACLE_MAX_ARCS"])


def get_oracle_max_nodes():
    """Get the finite-node limit of the node exact oracle."""
    return get_setting("ORACLE_MAX_NODES", DEFAULTS["ORACLE_MAX_NODES"])


def get_max_family_nodes():
    """Get the node-count guard of the family generators."""
    return get_setting("MAX_FAMILY_NODES", DEFAULTS["MAX_FAMILY_NODES"])


def get_random_max_attempts():
    """Get the rejection-sampling budget of the random generator."""
    return get_setting("RANDOM_MAX_ATTEMPTS", DEFAULTS["RANDOM_MAX_ATTEMPTS"])


def get_threads():
    """
    Get the number of Monte Carlo trial workers.

    The Django setting wins; otherwise the MWCUT_THREADS environment
    variable is read.
    """
    fallback = os.environ.get("MWCUT_THREADS", DEFAULTS["THREADS"])
    return max(1, int(get_setting("THREADS", fallback)))
