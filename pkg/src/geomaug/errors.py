"""Exception types shared across the package."""


class ConfigError(ValueError):
    """A pipeline config or input table is malformed (CLI exit code 2)."""


class StageError(RuntimeError):
    """A stage raised while processing an image (carries stage and index)."""
