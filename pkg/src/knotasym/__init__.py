"""Asymptotic finite-type invariants of torus knots along flow templates."""
from .algebra import LaurentSeries, ParamPoly
from .gauss import GaussDiagram, BraidWord, pairing, torus_knot_diagram, casson, writhe
from .torus import TorusKnotParams, alexander_torus, jones_torus, normalized_series, v2_from_alexander
from .flow import RotationNumber, closure_times, template_knot
from .report import ConvergenceReport, report_emit

__all__ = [
    "LaurentSeries", "ParamPoly", "GaussDiagram", "BraidWord", "pairing", "torus_knot_diagram", "casson",
    "writhe", "TorusKnotParams", "alexander_torus", "jones_torus", "normalized_series", "v2_from_alexander",
    "RotationNumber", "closure_times", "template_knot", "ConvergenceReport", "report_emit",
]
__version__ = "0.1.0"
