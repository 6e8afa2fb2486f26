"""Exact determinants of q-integer floor/ceiling matrices."""
