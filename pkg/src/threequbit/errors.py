"""Exception hierarchy.

Input problems derive from :class:`InputError` (a ``ValueError``), numerical
failures from :class:`NumericError`. The CLI maps the two families to exit
codes 2 and 3; :class:`EmptyInterval` gets its own code (4).
"""


class InputError(ValueError):
    pass


class NumericError(ArithmeticError):
    pass


class AllZero(InputError):
    pass


class BadQubitSet(InputError):
    pass


class BadPair(InputError):
    pass


class UnknownPreset(InputError):
    pass


class BadParam(InputError):
    pass


class BoundaryParams(InputError):
    pass


class SingularOp(NumericError):
    pass


class DegenerateState(NumericError):
    pass


class OutOfInterval(NumericError):
    pass


class NegativeRadicand(OutOfInterval):
    pass


class EmptyInterval(NumericError):
    pass


class OutOfBound(NumericError):
    pass


class NegativeDiscriminant(NumericError):
    pass
