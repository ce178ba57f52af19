"""Symbolic analysis of null vector fields and Kundt-type Lorentzian metrics."""

__version__ = "0.1.0"
