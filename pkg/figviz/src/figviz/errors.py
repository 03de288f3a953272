"""Exception types for artifact loading and rendering."""


class FigvizError(Exception):
    """Base class for all figviz failures."""


class SchemaError(FigvizError):
    """An input file is missing, malformed, or carries the wrong schema."""
