"""Monotone non-submodular maximization under partition matroid constraints."""
