"""Operator-level toolkit for conifold degenerations: Picard-Lefschetz and Stokes
operators, atom bookkeeping, numerical conifold monodromy, integral structure
and cluster mutations."""

__version__ = "0.1.0"
