"""
Constructive analysis of piecewise-linear Thurston maps.
"""
__version__ = "0.1.0"
