"""Eigenvalue-moment bounds from semigroup differences (Python bindings)."""

from ._core import *  # noqa: F401,F403
from ._core import ConvergenceError, DomainError, HypothesisError  # noqa: F401

__version__ = "0.1.0"
