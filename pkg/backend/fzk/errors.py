"""
Exception hierarchy for the lab.

Every error carries an ``exit_code`` and a human-readable ``detail`` so the
CLI can map failures onto its documented exit statuses without inspecting
messages.
"""


class FZKError(Exception):
    """Base error: carries an exit code and a detail message"""
    exit_code: int = 1

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class ParameterError(FZKError, ValueError):
    """Invalid request: bad shells, exponents, kinds (exit 2)"""
    exit_code = 2


class GridError(ParameterError):
    """Operation not defined on this grid"""


class SingularityError(ParameterError):
    """Evaluation at a point where the closed form is singular"""


class AdmissibilityError(ParameterError):
    """Constraint set admits no frequency triples"""


class WrapAroundError(ParameterError):
    """Time horizon exceeds the periodic-image guard"""


class NumericalError(FZKError, ArithmeticError):
    """Non-finite values or failed identity checks (exit 3)"""
    exit_code = 3
