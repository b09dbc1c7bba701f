"""Exact FP invariant of special alternating diagrams via Tait-graph Laplacians."""

__version__ = "0.1.0"
