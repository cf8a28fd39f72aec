"""Tests for mwcut."""
