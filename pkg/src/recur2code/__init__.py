"""Dimension-2 cyclic codes C(a,b,q) from second-order recurrences over F_q."""
