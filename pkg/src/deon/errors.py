"""Exception hierarchy shared by every module."""


class DeonError(Exception):
    """Base class for all errors raised by deon."""


class FormulaSyntaxError(DeonError, ValueError):
    def __init__(self, message, text, position):
        super().__init__(f"{message} at offset {position}: {text!r}")
        self.text = text
        self.position = position


class UnknownVariable(DeonError, ValueError):
    def __init__(self, name, position=None):
        where = "" if position is None else f" at offset {position}"
        super().__init__(f"unknown variable {name!r}{where}")
        self.name = name
        self.position = position


class VocabularyError(DeonError, ValueError):
    pass


class EmptySet(DeonError, ValueError):
    pass


class EmptyUniverse(DeonError, ValueError):
    pass


class PreconditionViolation(DeonError, ValueError):
    pass


class SizeUndefined(DeonError, ValueError):
    pass


class NonPrincipal(DeonError, ValueError):
    pass


class LimitExceeded(DeonError):
    def __init__(self, limit):
        super().__init__(f"more than {limit} sets")
        self.limit = limit


class BadParameters(DeonError, ValueError):
    pass


class BudgetExhausted(DeonError):
    pass


class ClaimFailure(DeonError):
    pass


class SystemFileError(DeonError, ValueError):
    pass
