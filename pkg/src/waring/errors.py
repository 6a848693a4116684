"""Exception hierarchy.

Errors raised from inside the decomposition pipeline carry the stage name and
the seed that reproduces the failing run.
"""
from __future__ import annotations


class WaringError(Exception):
    def __init__(self, message="", *, stage=None, seed=None):
        super().__init__(message)
        self.stage = stage
        self.seed = seed

    def __str__(self):
        msg = super().__str__()
        extra = []
        if self.stage is not None:
            extra.append(f"stage={self.stage}")
        if self.seed is not None:
            extra.append(f"seed={self.seed}")
        return f"{msg} [{', '.join(extra)}]" if extra else msg


class DegenerateInput(WaringError):
    pass


class DegreeMismatch(WaringError):
    pass


class ZeroForm(WaringError):
    pass


class NotDivisible(WaringError):
    def __init__(self, message="", *, remainder_norm=None, **kw):
        super().__init__(message, **kw)
        self.remainder_norm = remainder_norm


class SingularChange(WaringError):
    pass


class NotInKernel(WaringError):
    pass


class Inconsistent(WaringError):
    """Linear system has no solution within tolerance."""


class SquareQ(WaringError):
    pass


class ExceptionalParameter(WaringError):
    pass


class CubeInput(WaringError):
    pass


class NonTransverse(WaringError):
    pass


class DegenerateG(WaringError):
    pass


class IdentityFailure(WaringError):
    """An algebraic identity that holds by construction did not check out."""


# alias used by the rank-two pencil builder
InternalIdentityFailure = IdentityFailure


class CertificationViolated(WaringError):
    pass


class RetriesExhausted(WaringError):
    pass


# the three bounded-search failures are the same condition at different stages
SamplingExhausted = RetriesExhausted
SearchExhausted = RetriesExhausted


class ParseError(WaringError):
    def __init__(self, message, *, line=None, column=None):
        super().__init__(message)
        self.line = line
        self.column = column

    def __str__(self):
        loc = ""
        if self.line is not None:
            loc = f"line {self.line}"
            if self.column is not None:
                loc += f", column {self.column}"
            loc += ": "
        return loc + super().__str__()
