"""
GNS entropy toolkit: GNS representations of finite-dimensional C*-algebras,
reduced density operators and the entropy of their gauge ambiguity.
"""

__version__ = "0.1.0"
