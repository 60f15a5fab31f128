"""Induced pleasure from appraisal variables via fuzzy emotion rules."""

__version__ = "0.1.0"
