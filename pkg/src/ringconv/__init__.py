"""Catastrophicity analysis and minimal p-encoder synthesis for convolutional codes over Z_{p^r}."""

__version__ = "0.1.0"
