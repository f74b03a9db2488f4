"""Current version of the package active-margins."""
__version__ = "1.0.0"
