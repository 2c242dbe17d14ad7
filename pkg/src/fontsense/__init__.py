"""Font recommendation from short text via label distribution learning."""

__version__ = "0.1.0"
