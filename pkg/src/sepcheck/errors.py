"""Exception hierarchy shared by every module."""


class SepcheckError(Exception):
    """Base class; the CLI maps every subclass to exit code 2."""


class GameError(SepcheckError):
    """Invalid game construction."""


class ParseError(SepcheckError):
    def __init__(self, key, message):
        self.key = key
        super().__init__(f"{key}: {message}")


class MissingUtility(SepcheckError):
    pass


class ShapeMismatch(SepcheckError):
    pass


class IndexOutOfRange(SepcheckError):
    pass


class ComplexityRefusal(SepcheckError):
    def __init__(self, count, budget):
        self.count = count
        self.budget = budget
        super().__init__(f"{count} instantiations exceed budget {budget}")


class EmptySystem(SepcheckError):
    pass


class VerificationFailure(SepcheckError):
    """Internal invariant breach in the solver. Always a bug."""


class DualIdentityViolated(SepcheckError):
    pass


class NotApplicable(SepcheckError):
    pass


class AmbiguousTie(SepcheckError):
    pass


class DomainError(SepcheckError):
    pass


class MissingActionValues(SepcheckError):
    pass


class NonUniformGrid(SepcheckError):
    pass


class TooFewPlayers(SepcheckError):
    pass


class SplitMismatch(SepcheckError):
    pass
