"""Classifier chains, nested stacking and subset correction for multi-label learning."""

__version__ = "0.1.0"
