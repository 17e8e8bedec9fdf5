"""Bivariate copula modeling with separately controlled lower/upper tail dependence."""

from ._backend import BACKEND_NAME

__version__ = "0.1.0"
__all__ = ["BACKEND_NAME", "__version__"]
