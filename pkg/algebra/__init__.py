"""Finite-data algebra behind the bt-monodromy CLI."""
