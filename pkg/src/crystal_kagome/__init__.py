"""Exact computations for plane-partition crystal melting on the kagome lattice.

Modules
-------
partitions
    Plane-partition enumeration, add/remove moves and the MacMahon series.
lattice
    Kagome occupation encoding of plane-partition states.
operators
    Growth operators and the crystal-melting Hamiltonian.
spectra
    Truncated Hamiltonian matrices, eigenvalues and partition functions.
hexagons
    The classical 18-class hexagon model on small tori.
lax
    Lax operators, transfer matrices and commutation-relation solvers.
cli
    Command-line front end.
"""

__version__ = "0.1.0"
