"""Margin loan risk engine based on the conditional probability of negative return."""
from .__version__ import __version__

__all__ = ["__version__"]
