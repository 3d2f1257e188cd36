"""Geometries for the benchmark systems (coordinates in Angstrom)."""

from __future__ import annotations

import math

from .basis import Molecule, molecule_from_angstrom


def hydrogen_chain(n_atoms: int, spacing: float = 1.5) -> Molecule:
    coords = [(0.0, 0.0, i * spacing) for i in range(n_atoms)]
    return molecule_from_angstrom(["H"] * n_atoms, coords)


def h4_h4_ladder(separation: float = 100.0, spacing: float = 1.5) -> Molecule:
    """Two parallel H4 chains; monomer A first, then monomer B."""
    coords = [(0.0, 0.0, i * spacing) for i in range(4)]
    coords += [(separation, 0.0, i * spacing) for i in range(4)]
    return molecule_from_angstrom(["H"] * 8, coords)


def h3_h3_ladder(separation: float, spacing: float = 1.5) -> Molecule:
    coords = [(0.0, 0.0, i * spacing) for i in range(3)]
    coords += [(separation, 0.0, i * spacing) for i in range(3)]
    return molecule_from_angstrom(["H"] * 6, coords)


def lih(bond_length: float = 2.0) -> Molecule:
    return molecule_from_angstrom(["Li", "H"], [(0, 0, 0), (0, 0, bond_length)])


def h2o(r_oh: float = 2.0, angle_deg: float = 104.5) -> Molecule:
    half = math.radians(angle_deg) / 2.0
    coords = [
        (0.0, 0.0, 0.0),
        (r_oh * math.sin(half), 0.0, r_oh * math.cos(half)),
        (-r_oh * math.sin(half), 0.0, r_oh * math.cos(half)),
    ]
    return molecule_from_angstrom(["O", "H", "H"], coords)


def n2(bond_length: float = 2.0) -> Molecule:
    return molecule_from_angstrom(["N", "N"], [(0, 0, 0), (0, 0, bond_length)])


def h2(bond_length: float = 0.7414) -> Molecule:
    return molecule_from_angstrom(["H", "H"], [(0, 0, 0), (0, 0, bond_length)])


NAMED = {
    "h2": h2,
    "h4": lambda: hydrogen_chain(4),
    "h6": lambda: hydrogen_chain(6),
    "h8": lambda: hydrogen_chain(8),
    "h4-h4": h4_h4_ladder,
    "lih": lih,
    "h2o": h2o,
    "n2": n2,
}
