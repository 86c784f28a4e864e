class AdapterError(Exception):
    """Any configuration, model or data problem the adapter can diagnose."""


class ConfigError(AdapterError):
    """Malformed or inconsistent adapter configuration."""


class ModelError(AdapterError):
    """A model directory is missing, unloadable, or incompatible."""
