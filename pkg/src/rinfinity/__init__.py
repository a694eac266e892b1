"""R-infinity decision library for geometric 3-manifold groups."""

__version__ = "0.1.0"
