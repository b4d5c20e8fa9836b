"""Exception hierarchy for the gtd package."""


class GTDError(Exception):
    """Base class for all gtd errors."""


class DomainError(GTDError, ValueError):
    """A state point violates a validity predicate.

    ``predicate`` names the violated condition (e.g. ``"S>0"``).
    """

    def __init__(self, predicate: str, detail: str = ""):
        self.predicate = predicate
        msg = f"domain violation: {predicate}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class DivisionByZeroJet(GTDError, ZeroDivisionError):
    """Reciprocal of a jet whose value is (numerically) zero."""


class NoRootError(GTDError):
    """A bracketed solve found no root."""


class DegenerateJacobianError(GTDError):
    """The derivative needed to invert a relation vanishes."""


class ParamError(GTDError, ValueError):
    """Missing, unknown or out-of-range model parameter."""


class UnknownOracle(GTDError, KeyError):
    pass


class WrongRepresentation(GTDError):
    """Quantity not defined in the equation's representation."""


class DegenerateMetric(GTDError):
    """Metric determinant vanishes; curvature undefined."""
