"""Exact-arithmetic verification of the Cremmer-Gervais cluster structure on GL_n."""
from . import algebra, cluster, utils, verify

__version__ = '0.1.0'

__all__ = ['algebra', 'cluster', 'utils', 'verify', '__version__']
