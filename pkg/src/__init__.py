"""
polya-carlson - Rationality tests for integer power series in one and two variables
"""

__version__ = "1.0.0"
__author__ = "polya-carlson Team"
