"""Finite-model workbench for Leibniz and Suszko congruences, deductive filters and truth definability."""

__version__ = "0.1.0"
