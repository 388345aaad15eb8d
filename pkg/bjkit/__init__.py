"""bjkit - Birkhoff-James orthogonality toolkit for holomorphic functions on closed curves."""

__version__ = "0.1.0"
