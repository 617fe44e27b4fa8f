from typing import Optional


class SicSpinException(Exception):
    pass


class ParameterError(SicSpinException, ValueError):
    """A value violates a documented invariant or precondition."""


class SchemaError(SicSpinException):
    """A registry, config or data file does not match its schema."""

    def __init__(
        self,
        message: str,
        row: Optional[int] = None,
        column: Optional[str] = None,
    ) -> None:
        location = []
        if row is not None:
            location.append(f"row {row}")
        if column is not None:
            location.append(f"column '{column}'")
        if location:
            message = f"{message} ({', '.join(location)})"
        super().__init__(message)
        self.row = row
        self.column = column


class ConfigError(SchemaError):
    pass
