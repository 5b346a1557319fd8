"""Quantum 6j-symbols at roots of unity and Yokota-type invariants of plane graphs."""

from .errors import (BadAngles, ColorSyntaxError, DivergentSum, EmptyWindow, IrreducibleDiagram,
                     MalformedGraph, NoRationalApprox, NotAdmissible, PoleError,
                     PrecisionExhausted, YokotaError, ZeroInvariant)
from .qarith import ColorSpec, RootContext, parse_color, qbinom, qbrace, qfact, qint
from .sixj import admissible_vertex, sixj_general, sixj_integer, tet
from .graph import PlaneGraph, build_graph, check_coloring, expand_vertex, parse_graph, serialize_graph
from .evaluator import InvariantResult, yokota
from .pyramids import builtin
from .volume import angle_to_color, growth_estimate, lobachevsky, sweep

__all__ = [
    "BadAngles", "ColorSyntaxError", "DivergentSum", "EmptyWindow", "IrreducibleDiagram",
    "MalformedGraph", "NoRationalApprox", "NotAdmissible", "PoleError", "PrecisionExhausted",
    "YokotaError", "ZeroInvariant",
    "ColorSpec", "RootContext", "parse_color", "qbinom", "qbrace", "qfact", "qint",
    "admissible_vertex", "sixj_general", "sixj_integer", "tet",
    "PlaneGraph", "build_graph", "check_coloring", "expand_vertex", "parse_graph", "serialize_graph",
    "InvariantResult", "yokota", "builtin",
    "angle_to_color", "growth_estimate", "lobachevsky", "sweep",
]

__version__ = "0.1.0"
