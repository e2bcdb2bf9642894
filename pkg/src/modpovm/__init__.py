"""Exact construction and certification of minimal IC-POVMs built from
finite-index subgroups of the modular group."""

__version__ = "0.1.0"
