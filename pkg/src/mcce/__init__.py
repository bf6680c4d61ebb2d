"""Top-level package for mcce."""

__all__ = ["__version__"]

__version__ = "0.1.0a0"
