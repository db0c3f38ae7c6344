"""Exception types shared across the package."""


class ConfikError(Exception):
    """Base class for all errors raised by this package."""


class TooLarge(ConfikError):
    """An exhaustive operation was asked to run above its size guard."""


class UnsatContext(ConfikError):
    """An operation that requires a satisfiable formula got an unsatisfiable one."""


class UnsatInput(ConfikError):
    """Reasoning over an unsatisfiable clause set was requested."""


class UnsatModel(ConfikError):
    """The configuration model admits no products."""


class AlreadyAssigned(ConfikError):
    """A decision targeted a variable that already has a value."""


class InconsistentDecision(ConfikError):
    """A decision would make the session constraint unsatisfiable; it was rejected."""


class NotAUserDecision(ConfikError):
    """Retraction targeted a variable without a live user decision."""


class NoSolutions(ConfikError):
    """A solution-domain operation needs at least one solution."""


class PreferenceError(ConfikError):
    """The supplied preference relation is not a partial order on the solutions."""


class ModelSyntaxError(ConfikError):
    """Malformed feature-model or OSD text."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class ModelSemanticError(ModelSyntaxError):
    """Well-formed text describing an invalid model (duplicate names, bad groups, ...)."""


class DimacsError(ConfikError):
    """Malformed DIMACS CNF input."""
