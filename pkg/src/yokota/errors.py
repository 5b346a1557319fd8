"""Exception hierarchy shared by all modules.

Every exception carries an ``exit_code`` so the command-line front end can map
failures onto its scriptable exit codes without a lookup table of its own.
"""


class YokotaError(Exception):
    exit_code = 3


class PoleError(YokotaError, ZeroDivisionError):
    """A quantum binomial vanished where its inverse is needed.

    Usually an unperturbed integer or half-integer color; add epsilon.
    """

    exit_code = 5


class DivergentSum(PoleError):
    """A summation weight hit a pole (integer colors without perturbation)."""


class NotAdmissible(YokotaError, ValueError):
    exit_code = 3


class MalformedGraph(YokotaError, ValueError):
    exit_code = 3


class EmptyWindow(YokotaError, ValueError):
    exit_code = 3


class IrreducibleDiagram(YokotaError, RuntimeError):
    exit_code = 3


class ZeroInvariant(YokotaError, ValueError):
    exit_code = 5


class BadAngles(YokotaError, ValueError):
    exit_code = 3


class NoRationalApprox(YokotaError, ValueError):
    exit_code = 3


class PrecisionExhausted(YokotaError, RuntimeError):
    """Escalating the working precision did not reach the requested accuracy."""

    exit_code = 5


class ColorSyntaxError(YokotaError, ValueError):
    exit_code = 2
