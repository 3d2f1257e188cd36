"""Molecular qubit-Hamiltonian exporter: STO-3G integrals, RHF, orbital
transforms, Jordan-Wigner mapping, and classical reference energies."""

from .basis import Molecule, molecule_from_angstrom
from .export import ExportResult, MoleculeSpec, build_export, export, write_export
from .molecules import NAMED

__version__ = "0.1.0"
