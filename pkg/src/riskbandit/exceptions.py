"""Exception types shared across the package."""


class UndefinedStatisticError(ValueError):
    """Raised when an empirical statistic is queried before any reward was observed."""


class DegenerateMixtureError(RuntimeError):
    """Raised when rejection sampling from a truncated mixture keeps missing its support.

    This happens when essentially all of the mixture's mass lies outside the
    [floor, 1] acceptance window, so the expected number of attempts per
    accepted draw explodes.
    """


class ConfigError(ValueError):
    """Raised for invalid experiment configuration (bad YAML schema, bad CLI input)."""
