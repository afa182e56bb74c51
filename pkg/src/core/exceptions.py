"""
Exception hierarchy for the Hasse Surface Workbench

InputError subclasses report a caller mistake (bad prime, violated
precondition). InternalConsistencyError subclasses mean an exact computation
contradicted a proven identity, i.e. a bug.
"""


class HasseWorkbenchError(Exception):
    """Root of all workbench errors"""


class InputError(HasseWorkbenchError, ValueError):
    """Invalid input or violated precondition"""


class InternalConsistencyError(HasseWorkbenchError, AssertionError):
    """An exact identity failed to hold"""


# Input errors


class NotPrime(InputError):
    pass


class NotOneModThree(InputError):
    pass


class ZeroResidue(InputError):
    pass


class DegenerateLeadingCoefficient(InputError):
    pass


class HypothesesNotMet(InputError):
    pass


class RamifiedPrime(InputError):
    pass


class GcdFactorizationOverflow(InputError):
    pass


class NotPositiveDefinite(InputError):
    pass


class NotUnimodular(InputError):
    pass


class NonUnitCoordinate(InputError):
    pass


class UnsupportedForm(InputError):
    pass


# Consistency errors


class NonIntegralTrace(InternalConsistencyError):
    pass


class InvariantViolation(InternalConsistencyError):
    pass


class ReductionMismatch(InternalConsistencyError):
    pass
