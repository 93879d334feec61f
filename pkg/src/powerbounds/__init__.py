"""Spectral bounds on the k-independence and k-distance chromatic numbers."""

from __future__ import annotations

__version__ = "0.1.0"
