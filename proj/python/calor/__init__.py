"""Controlled-English steady heat-conduction solver."""

import json as _json

from ._core import CalorError, bounds, classify, solve_file, template_json

__all__ = [
    "CalorError",
    "bounds",
    "classify",
    "solve",
    "solve_file",
    "template",
    "template_json",
]


def solve(path, **kwargs):
    """Solve a problem statement file; returns the report as a dict.

    Keyword arguments are forwarded to :func:`solve_file` (``fe``, ``tol``,
    ``out_dir``, ``json_only``).  Raises ``RuntimeError`` on a nonzero exit.
    """
    code, report = solve_file(str(path), **kwargs)
    parsed = _json.loads(report)
    if code != 0:
        raise RuntimeError(parsed.get("error") or parsed.get("well_posed"))
    return parsed


def template(text):
    """Canonical PDE template of a statement, as a dict."""
    return _json.loads(template_json(text))
