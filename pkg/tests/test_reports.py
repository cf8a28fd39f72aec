"""
Tests for report rendering.
"""

from django.test import SimpleTestCase

from mwcut.core import INF
from mwcut.reports import format_value, ratio


class FormatValueTestCase(SimpleTestCase):
    """Tests for format_value."""

    def test_large_seed_kept_exactly(self):
        """Test that a 128-bit seed renders without float rounding."""
        seed = 2**127 + 12345
        self.assertEqual(format_value(seed), str(seed))

    def test_numbers(self):
        """Test float, infinity, boolean and missing values."""
        self.assertEqual(format_value(2.0), "2")
        self.assertEqual(format_value(0.25), "0.25")
        self.assertEqual(format_value(INF), "inf")
        self.assertEqual(format_value(True), "true")
        self.assertEqual(format_value(None), "-")

    def test_ratio_of_zero_lp(self):
        """Test that a zero LP cost has no ratio."""
        self.assertIsNone(ratio(1.0, 0.0))
