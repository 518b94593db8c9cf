"""Exact symbolic verification of minor-product splitting sections on the
flag varieties of the classical groups SL_n, Sp_2n, and SO_2n."""

__version__ = "0.1.0"
