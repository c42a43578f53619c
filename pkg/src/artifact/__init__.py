"""Clifford synthesis and transversal-gate analysis for stabilizer codes."""

__version__ = "0.1.0"
