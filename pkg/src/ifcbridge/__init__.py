"""Executable workbench for fine- and coarse-grained dynamic information-flow control."""

from .lattice import Label, Lattice, lattice_load

__all__ = ["Label", "Lattice", "lattice_load"]
