"""
Report rendering shared by the management commands.

Reports are ``key value`` lines in a fixed key order, or one JSON object
with the same keys. Timing keys start with ``time_`` so runs can be compared
without them.
"""

import json
import math
from typing import Any, Dict, Mapping, Optional

from mwcut.core import CutSolution, format_number

NOT_APPLICABLE = "-"


def format_value(value: Any) -> str:
    """Render one report value as a single token."""
    if value is None:
        return NOT_APPLICABLE
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format_number(value)
    if isinstance(value, (tuple, list)):
        return ",".join(str(v) for v in value) or NOT_APPLICABLE
    return str(value)


def _json_value(value: Any) -> Any:
    if isinstance(value, float) and math.isinf(value):
        return format_number(value)
    if isinstance(value, tuple):
        return list(value)
    return value


def render_report(fields: Mapping[str, Any], as_json: bool = False) -> str:
    """
    Render ``fields`` in insertion order.

    Args:
        fields: Report keys and values.
        as_json: Emit a JSON object instead of ``key value`` lines.
    """
    if as_json:
        return json.dumps({k: _json_value(v) for k, v in fields.items()}) + "\n"
    return "".join(f"{key} {format_value(value)}\n" for key, value in fields.items())


def ratio(cut_cost: float, lp_cost: float) -> Optional[float]:
    if lp_cost > 0:
        return cut_cost / lp_cost
    return None if cut_cost > 0 else 1.0


def cut_fields(cut: CutSolution, lp_cost: Optional[float] = None) -> Dict[str, Any]:
    """Report fields describing a rounded cut."""
    ell = cut.meta.get("ell")
    fields = {}
    if lp_cost is not None:
        fields["lp_cost"] = lp_cost
    fields["cut_cost"] = cut.cost
    if lp_cost is not None:
        fields["ratio_cut_over_lp"] = ratio(cut.cost, lp_cost)
    fields["theta"] = cut.meta.get("theta")
    fields["ell"] = ell + 1 if ell is not None else None
    fields["seed"] = cut.meta.get("seed")
    fields["method"] = cut.meta.get("method")
    return fields
