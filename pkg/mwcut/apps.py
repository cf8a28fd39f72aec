"""Django app configuration for mwcut."""

from django.apps import AppConfig


class MwcutConfig(AppConfig):
    """Multiway cut app configuration.

    The app carries no models; registering it exposes the ``mc_*``
    management commands.
    """

    name = "mwcut"
    verbose_name = "Multiway Cut"
