"""Quadratic residue symbols and reciprocity tables."""
