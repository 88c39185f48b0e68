"""Fractional Zakharov-Kuznetsov simulation and verification lab"""

__version__ = "0.1.0"
