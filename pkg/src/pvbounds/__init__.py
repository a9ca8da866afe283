"""Brute-force verification of explicit bounds for Dirichlet character sums."""
from .records import VerificationRecord

__version__ = "0.1.0"
__all__ = ["VerificationRecord", "__version__"]
