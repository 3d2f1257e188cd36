"""Minimal STO-3G basis set and contracted Gaussian shells.

Only the elements needed by the fixture molecules are tabulated.  Exponents
and contraction coefficients are the standard published STO-3G values with
the element scale factors already folded in; primitives are normalized here
and each contracted function is renormalized after contraction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

ANGSTROM_TO_BOHR = 1.0 / 0.52917721092

ATOMIC_NUMBER = {"H": 1, "Li": 3, "C": 6, "N": 7, "O": 8}

# element -> list of shells (type, exponents, coefficients-by-subshell)
_S = "S"
_SP = "SP"

STO3G = {
    "H": [
        (_S, [3.42525091, 0.62391373, 0.16885540],
         {"s": [0.15432897, 0.53532814, 0.44463454]}),
    ],
    "Li": [
        (_S, [16.1195750, 2.93620070, 0.79465050],
         {"s": [0.15432897, 0.53532814, 0.44463454]}),
        (_SP, [0.63628970, 0.14786010, 0.04808870],
         {"s": [-0.09996723, 0.39951283, 0.70011547],
          "p": [0.15591627, 0.60768372, 0.39195739]}),
    ],
    "C": [
        (_S, [71.6168370, 13.0450960, 3.53051220],
         {"s": [0.15432897, 0.53532814, 0.44463454]}),
        (_SP, [2.94124940, 0.68348310, 0.22228990],
         {"s": [-0.09996723, 0.39951283, 0.70011547],
          "p": [0.15591627, 0.60768372, 0.39195739]}),
    ],
    "N": [
        (_S, [99.1061690, 18.0523120, 4.88566020],
         {"s": [0.15432897, 0.53532814, 0.44463454]}),
        (_SP, [3.78045590, 0.87849660, 0.28571440],
         {"s": [-0.09996723, 0.39951283, 0.70011547],
          "p": [0.15591627, 0.60768372, 0.39195739]}),
    ],
    "O": [
        (_S, [130.7093200, 23.8088610, 6.44360830],
         {"s": [0.15432897, 0.53532814, 0.44463454]}),
        (_SP, [5.03315130, 1.16959610, 0.38038900],
         {"s": [-0.09996723, 0.39951283, 0.70011547],
          "p": [0.15591627, 0.60768372, 0.39195739]}),
    ],
}


@dataclass(frozen=True)
class BasisFunction:
    """Contracted Cartesian Gaussian: sum_k c_k N_k x^i y^j z^k exp(-a_k r^2)."""

    center: tuple[float, float, float]
    angular: tuple[int, int, int]
    exponents: tuple[float, ...]
    coefficients: tuple[float, ...]  # include primitive norms
    atom_index: int

    @property
    def total_angular(self) -> int:
        return sum(self.angular)


def _primitive_norm(alpha: float, angular: tuple[int, int, int]) -> float:
    i, j, k = angular
    from math import factorial, pi, sqrt

    def dfact(n: int) -> int:  # (2n-1)!!
        out = 1
        for m in range(2 * n - 1, 0, -2):
            out *= m
        return out

    num = (2 * alpha / pi) ** 0.75 * (4 * alpha) ** ((i + j + k) / 2)
    den = sqrt(dfact(i) * dfact(j) * dfact(k))
    return num / den


def _contracted(center, angular, exponents, raw_coeffs, atom_index) -> BasisFunction:
    coeffs = np.array([c * _primitive_norm(a, angular)
                       for a, c in zip(exponents, raw_coeffs)])
    bf = BasisFunction(tuple(center), tuple(angular), tuple(exponents),
                       tuple(coeffs), atom_index)
    from .integrals import overlap_contracted

    norm = overlap_contracted(bf, bf)
    return BasisFunction(tuple(center), tuple(angular), tuple(exponents),
                         tuple(coeffs / np.sqrt(norm)), atom_index)


@dataclass
class Molecule:
    """Geometry (bohr), charge, and the expanded basis."""

    symbols: list[str]
    coords: np.ndarray  # (n_atoms, 3) in bohr
    charge: int = 0

    @property
    def n_electrons(self) -> int:
        return sum(ATOMIC_NUMBER[s] for s in self.symbols) - self.charge

    def nuclear_repulsion(self) -> float:
        e = 0.0
        for i in range(len(self.symbols)):
            for j in range(i + 1, len(self.symbols)):
                r = np.linalg.norm(self.coords[i] - self.coords[j])
                e += ATOMIC_NUMBER[self.symbols[i]] * ATOMIC_NUMBER[self.symbols[j]] / r
        return e

    def basis_functions(self) -> list[BasisFunction]:
        """STO-3G functions in atom order; within an atom: 1s, 2s, 2px, 2py, 2pz."""
        out = []
        for idx, (symbol, center) in enumerate(zip(self.symbols, self.coords)):
            if symbol not in STO3G:
                raise ValueError(f"no STO-3G data for element {symbol!r}")
            for shell_type, exponents, coeffs in STO3G[symbol]:
                out.append(_contracted(center, (0, 0, 0), exponents, coeffs["s"], idx))
                if shell_type == _SP:
                    for axis in range(3):
                        angular = tuple(1 if a == axis else 0 for a in range(3))
                        out.append(_contracted(center, angular, exponents,
                                               coeffs["p"], idx))
        return out


def molecule_from_angstrom(symbols: list[str], coords_angstrom, charge: int = 0) -> Molecule:
    coords = np.asarray(coords_angstrom, dtype=float) * ANGSTROM_TO_BOHR
    return Molecule(symbols=list(symbols), coords=coords, charge=charge)
