"""Exception types shared across the package."""


class CausalError(Exception):
    """Base class for all errors raised by this package."""


class DanglingRefError(CausalError):
    """A variable, world, or (variable, world) pair is not defined in the model."""


class RangeError(CausalError):
    """A value lies outside a declared range, or a table is not total over it."""


class CycleError(CausalError):
    """The dependency graph of the structural equations is cyclic.

    ``cycle`` names one offending cycle as a list of (variable, world) pairs.
    """

    def __init__(self, message, cycle=()):
        super().__init__(message)
        self.cycle = tuple(cycle)


class FormulaSyntaxError(CausalError):
    """Formula text does not conform to the grammar.

    ``offset`` is the byte offset of the first offending character.
    """

    def __init__(self, message, offset):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class NestedInterventionError(FormulaSyntaxError):
    """An intervention body contains another intervention."""


class ModelFileError(CausalError):
    """A model file is malformed.  Carries the file name and line number."""

    def __init__(self, message, filename="<model>", line=0):
        super().__init__(f"{filename}:{line}: {message}")
        self.filename = filename
        self.line = line


class SearchBudgetExceeded(CausalError):
    """A cause search hit its configured caps before reaching a definite answer.

    The attached ``verdict`` (when present) is marked inconclusive; a truncated
    search is never reported as a definite "no cause".
    """

    def __init__(self, message, verdict=None, spent=0):
        super().__init__(message)
        self.verdict = verdict
        self.spent = spent
