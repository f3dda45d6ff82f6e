"""Supersaturation constants for color-critical graphs: exact counts, polynomials, thresholds and small-case oracles."""

__version__ = "0.1.0"
