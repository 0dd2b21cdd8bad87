"""
Turyn-Storer audit: executable checks of Theorem 1 on binary sequences,
a counterexample finder for its claim (iv), and an exhaustive Barker
sequence search.
"""

__version__ = "1.0.0"
