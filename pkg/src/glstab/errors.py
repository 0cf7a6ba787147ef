"""Exception types shared across the workbench."""


class CapExceeded(Exception):
    """A resource cap was hit.  Carries partial-progress metadata."""

    def __init__(self, message, **metadata):
        super().__init__(message)
        self.metadata = dict(metadata)


class CompositionError(Exception):
    """Consecutive differentials do not compose to zero."""


class FieldMismatch(Exception):
    """Mixed-modulus field arithmetic."""


class DivisionByZero(ZeroDivisionError):
    """Inverse of zero in a prime field."""


class NotPrime(ValueError):
    """A prime modulus was required."""


class NotAUnit(ValueError):
    """A nonzero field element was required."""


class ActionClosureError(Exception):
    """A group action left the declared basis set."""


class WellDefinednessFailure(Exception):
    """A map failed to kill a relation it must kill.  Carries the witness."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotFound(Exception):
    """A search over the finite field was exhausted (field too small).

    Expected failure mode for cone vectors and inductive lifts; carries a
    witness describing what blocked the search.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
