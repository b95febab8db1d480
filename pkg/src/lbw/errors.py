"""Exception hierarchy shared by every layer of the workbench."""


class LbwError(Exception):
    """Base class for all workbench errors."""


class SignatureError(LbwError):
    """Unknown symbol, arity mismatch, or incompatible signatures."""


class UnboundVariable(LbwError):
    pass


class NotACongruence(LbwError):
    pass


class NotALattice(LbwError):
    pass


class EmptySolutionSet(LbwError):
    pass


class PresentationError(LbwError):
    """The logic presentation lacks what an operation needs (e.g. a calculus)."""


class BudgetExceeded(LbwError):
    """A configurable resource bound was hit.

    ``partial`` carries whatever progress measure the raising operation
    reached (e.g. number of free-algebra elements generated so far).
    """

    def __init__(self, what, limit, partial=None):
        self.what = what
        self.limit = limit
        self.partial = partial
        msg = f"{what}: budget {limit} exceeded"
        if partial is not None:
            msg += f" (reached {partial})"
        super().__init__(msg)
