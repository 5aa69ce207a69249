"""Topology of subgroup-lattice order complexes."""

__version__ = "0.1.0"
