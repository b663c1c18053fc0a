class IdformsError(Exception):
    """Base class for library errors."""


class SchemaError(IdformsError, ValueError):
    """Malformed JSON input or structurally invalid arguments."""


class PreconditionError(IdformsError, ValueError):
    """A mathematical precondition of an operation does not hold."""


class GroupMismatchError(IdformsError, ValueError):
    """Operands live in different groups."""
