"""Mollified curvature of nonsmooth metrics: Python bindings."""

import json as _json

from ._geomolt import (
    CantorCurve,
    DomainError,
    MetricField,
    PiecewiseSurface,
    SingularMetricError,
    build_example,
    cantor_function,
    cantor_theta,
    curvature_dimension,
    examples,
    load_example,
    save_example,
)
from ._geomolt import run_report as _run_report


def run_report(config, jobs=1):
    """Run a study given as a dict (or JSON text) and return the report as a dict."""
    if not isinstance(config, str):
        config = _json.dumps(config)
    return _json.loads(_run_report(config, jobs))


__all__ = [
    "CantorCurve",
    "DomainError",
    "MetricField",
    "PiecewiseSurface",
    "SingularMetricError",
    "build_example",
    "cantor_function",
    "cantor_theta",
    "curvature_dimension",
    "examples",
    "load_example",
    "run_report",
    "save_example",
]
