"""Exact verifier for projective manifolds with Ulrich (co)tangent bundle."""

__version__ = "0.1.0"
