"""Unit groups, Wedderburn decompositions and radicals of F(C_n x Q12) and
F(C_n x D12) over finite fields, with brute-force verification."""

__version__ = "0.1.0"
