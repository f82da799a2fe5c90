"""Exception hierarchy shared by all qci modules."""


class QciError(Exception):
    """Base class for every error raised by this package."""


class NotPrime(QciError, ValueError):
    pass


class ZeroElement(QciError, ZeroDivisionError):
    pass


class Inconsistent(QciError, ValueError):
    """Linear system has no solution."""


class BadCommutationMatrix(QciError, ValueError):
    pass


class BadExponent(QciError, ValueError):
    pass


class MixedParents(QciError, ValueError):
    pass


class BadSplit(QciError, ValueError):
    pass


class TwistMismatch(QciError, ValueError):
    pass


class InhomogeneousRelation(QciError, ValueError):
    pass


class ModuleRelationError(QciError, ValueError):
    """Action matrices violate the algebra relations or the grading."""


class ResourceLimit(QciError, RuntimeError):
    """A computation would exceed the configured budget."""


class BadParams(QciError, ValueError):
    pass


class SpecParse(QciError, ValueError):
    pass


class InvariantViolation(QciError, AssertionError):
    """A postcondition check on a constructed object failed."""
