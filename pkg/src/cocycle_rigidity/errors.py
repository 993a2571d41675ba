"""Exception types shared across the package."""


class RigidityError(Exception):
    """Base class for all errors raised by this package."""


class RadiusExceeded(RigidityError):
    """A query needed the Cayley graph beyond the explorer's maximum radius."""

    def __init__(self, message: str, radius: int | None = None):
        super().__init__(message)
        self.radius = radius


class EnumerationCapExceeded(RigidityError):
    """An exhaustive enumeration would exceed the configured cap."""


class PreconditionError(RigidityError):
    """An operation was called with inputs violating its precondition."""


class NotInDelta(PreconditionError):
    """A configuration was expected to be eventually zero but is not."""


class GroupSpecError(RigidityError):
    """A group spec string could not be parsed."""

    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class LabelError(RigidityError):
    """A canonical element or word label did not resolve."""


class DocumentError(RigidityError):
    """A cocycle or result document is malformed."""


class CompletenessError(DocumentError):
    """A rule table is missing at least one window pattern."""

    def __init__(self, generator: str, pattern: str):
        super().__init__(f"rule table for generator {generator!r} is missing pattern {pattern!r}")
        self.generator = generator
        self.pattern = pattern
