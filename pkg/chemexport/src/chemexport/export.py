"""Molecular qubit-Hamiltonian export: integrals -> RHF -> orbital choice ->
Jordan-Wigner -> JSON file with reference energies in the metadata.

The JSON layout is the solver's Hamiltonian schema:
{"format_version": 1, "n_qubits": N,
 "terms": [{"pauli": "<IXYZ...>", "coeff": <float>}, ...],
 "metadata": {...}}
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field

import numpy as np

from .basis import ANGSTROM_TO_BOHR, Molecule
from .ccsd import CcsdError, ccsd_energy
from .eigen import ground_state_energy
from .fermion import (
    hartree_fock_bitstring,
    neel_bitstring,
    qubit_hamiltonian,
    spin_raising_lowering_penalty,
)
from .integrals import dipole_tables, integral_tables
from .orbitals import (
    ORBITAL_TYPES,
    cmo_coefficients,
    freeze_core,
    lmo_coefficients,
    oao_coefficients,
    transform_integrals,
)
from .scf import restricted_hartree_fock

logger = logging.getLogger("chemexport")

FORMAT_VERSION = 1


@dataclass
class MoleculeSpec:
    """What to export: geometry, orbital basis, frozen orbitals, penalties."""

    molecule: Molecule
    orbital_type: str = "OAO"
    frozen: list[int] = field(default_factory=list)
    name: str = ""
    spin_penalty_beta: float = 0.0
    compute_fci: bool = True
    compute_ccsd: bool = True

    def __post_init__(self) -> None:
        if self.orbital_type not in ORBITAL_TYPES:
            raise ValueError(f"orbital_type must be one of {ORBITAL_TYPES}")
        if self.molecule.n_electrons % 2 != 0:
            raise ValueError("closed-shell export needs an even electron count")
        if self.frozen and self.orbital_type != "CMO":
            raise ValueError("frozen orbitals are only supported with CMO")


@dataclass
class ExportResult:
    n_qubits: int
    terms: list[tuple[float, str]]
    metadata: dict


def _geometry_entry(mol: Molecule) -> list[list]:
    bohr_to_angstrom = 1.0 / ANGSTROM_TO_BOHR
    return [
        [symbol, [round(float(x) * bohr_to_angstrom, 10) for x in xyz]]
        for symbol, xyz in zip(mol.symbols, mol.coords)
    ]


def build_export(spec: MoleculeSpec) -> ExportResult:
    mol = spec.molecule
    s, t, v, eri = integral_tables(mol)
    scf = restricted_hartree_fock(mol, s, t, v, eri)
    e_nuc = mol.nuclear_repulsion()

    if spec.orbital_type == "CMO":
        coeffs = cmo_coefficients(scf)
    elif spec.orbital_type == "OAO":
        coeffs = oao_coefficients(scf)
    else:
        coeffs = lmo_coefficients(scf, dipole_tables(mol))
        logger.warning("LMO export is experimental: localized-orbital ordering "
                       "is not standardized")

    h_orb, g_orb = transform_integrals(scf.hcore, eri, coeffs)
    n_orb = h_orb.shape[0]
    active = [p for p in range(n_orb) if p not in spec.frozen]
    e_const = e_nuc
    if spec.frozen:
        e_core, h_act, g_act = freeze_core(h_orb, g_orb, spec.frozen, active)
        e_const += e_core
    else:
        h_act, g_act = h_orb, g_orb
    n_active = len(active)
    n_qubits = 2 * n_active
    n_active_electrons = mol.n_electrons - 2 * len(spec.frozen)

    terms = qubit_hamiltonian(h_act, g_act, e_const)

    if spec.orbital_type == "CMO":
        reference = hartree_fock_bitstring(
            n_active, n_active_electrons // 2, n_active_electrons // 2
        )
    else:
        reference = neel_bitstring(n_active)

    metadata = {
        "molecule": spec.name,
        "geometry": _geometry_entry(mol),
        "basis": "STO-3G",
        "orbitals": spec.orbital_type,
        "frozen_orbitals": list(spec.frozen),
        "n_electrons": n_active_electrons,
        "nuclear_repulsion": e_nuc,
        "reference_bitstring": reference,
        "e_hf": scf.energy,
    }
    if spec.compute_fci:
        e_fci, fci_state = ground_state_energy(terms, n_qubits, return_state=True)
        metadata["e_fci"] = e_fci
        ref_index = sum(int(b) << i for i, b in enumerate(reference))
        metadata["reference_weight_in_fci"] = float(abs(fci_state[ref_index]) ** 2)
    if spec.compute_ccsd:
        try:
            h_cmo, g_cmo = transform_integrals(scf.hcore, eri, scf.mo_coeffs)
            if spec.frozen:
                e_core_c, h_c, g_c = freeze_core(h_cmo, g_cmo, spec.frozen, active)
                metadata["e_ccsd"] = ccsd_energy(
                    h_c, g_c, n_active_electrons, e_nuc + e_core_c
                )
            else:
                metadata["e_ccsd"] = ccsd_energy(h_cmo, g_cmo, mol.n_electrons, e_nuc)
        except CcsdError as exc:
            logger.warning("CCSD reference skipped: %s", exc)

    result = ExportResult(n_qubits=n_qubits, terms=terms, metadata=metadata)
    if spec.spin_penalty_beta != 0.0:
        append_spin_penalty(result, n_active, spec.spin_penalty_beta)
    return result


def append_spin_penalty(result: ExportResult, n_spatial: int, beta: float) -> None:
    """Merge beta*S+S- into the stored terms, flagged through the metadata."""
    penalty = spin_raising_lowering_penalty(n_spatial, beta)
    result.metadata["spin_penalty"] = {
        "beta": beta,
        "term_start": len(result.terms),
        "term_count": len(penalty),
    }
    result.terms = result.terms + penalty


def write_export(result: ExportResult, path) -> None:
    doc = {
        "format_version": FORMAT_VERSION,
        "n_qubits": result.n_qubits,
        "terms": [{"pauli": letters, "coeff": coeff}
                  for coeff, letters in result.terms],
        "metadata": result.metadata,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def export(spec: MoleculeSpec, out_path) -> ExportResult:
    result = build_export(spec)
    write_export(result, out_path)
    return result


def export_spin_penalty(spec: MoleculeSpec, beta: float, out_path) -> ExportResult:
    """Export with beta*S+S- merged into the terms (metadata-flagged)."""
    spec.spin_penalty_beta = beta
    return export(spec, out_path)
