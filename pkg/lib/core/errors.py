# -*- coding: utf-8 -*-


class RelcoverError(Exception):
    """Base class for every error raised by the toolkit."""


class ConfigError(RelcoverError):
    """Bad command line flag, config value or unsupported parameter."""
    exit_code = 2


class CacheError(RelcoverError):
    """Geometry cache could not be read, written or trusted."""
    exit_code = 3


class ConstructionError(RelcoverError):
    """A structural postcondition of the geometry or scheme build failed."""
    exit_code = 1


class FieldMismatchError(RelcoverError, TypeError):
    """Arithmetic between elements of two different fields."""
