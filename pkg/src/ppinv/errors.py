class PPInvError(Exception):
    """Base class for all errors raised by ppinv."""


class FieldConstructionError(PPInvError):
    pass


class ContextMismatchError(PPInvError):
    pass


class OrderCapError(PPInvError):
    pass


class ParameterError(PPInvError):
    pass


class NotPermutationError(PPInvError):
    pass
