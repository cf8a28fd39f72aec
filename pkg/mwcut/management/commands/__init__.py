"""Management commands for mwcut."""
