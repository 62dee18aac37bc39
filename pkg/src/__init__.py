"""Balanced ALM splitting suite: ALM, ADMM and DRS solvers with equivalence and rate diagnostics."""

__version__ = "0.1.0"
