"""Entanglement dynamics of two static detectors coupled to a massless scalar field."""

__version__ = "0.1.0"
