"""glstab: exact-arithmetic workbench for general-position chain complexes,
signed unordered quotients, group-homology spectral pages and Milnor symbol
maps over small prime fields."""

__version__ = "0.1.0"
