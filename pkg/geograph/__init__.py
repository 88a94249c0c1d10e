"""Geometric graph construction, GCN classification, diagnostics and spectral sparsification."""

__version__ = "0.1.0"
