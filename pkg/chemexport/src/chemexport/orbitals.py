"""Single-particle bases for the exported Hamiltonians: canonical MOs,
Loewdin-orthonormalized AOs, and (best effort) Foster-Boys localized MOs."""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .scf import ScfResult

ORBITAL_TYPES = ("CMO", "OAO", "LMO")


def cmo_coefficients(scf: ScfResult) -> np.ndarray:
    return scf.mo_coeffs


def oao_coefficients(scf: ScfResult) -> np.ndarray:
    """Loewdin S^{-1/2}: symmetric orthogonalization keeps atom ordering."""
    return scipy.linalg.fractional_matrix_power(scf.overlap, -0.5).real


def lmo_coefficients(scf: ScfResult, dipoles: np.ndarray,
                     max_sweeps: int = 200, tol: float = 1e-10) -> np.ndarray:
    """Foster-Boys localization by Jacobi sweeps, occupied and virtual blocks
    separately.  Experimental: the localized-orbital ordering is whatever the
    sweeps produce, which is only a qualitative match for published setups.
    """
    c = scf.mo_coeffs.copy()

    def localize(block: np.ndarray) -> np.ndarray:
        n = block.shape[1]
        if n < 2:
            return block
        r = np.array([block.T @ dipoles[a] @ block for a in range(3)])
        u = np.eye(n)
        for _ in range(max_sweeps):
            biggest = 0.0
            for i in range(n):
                for j in range(i + 1, n):
                    a_ij = sum(
                        r[a, i, j] ** 2 - 0.25 * (r[a, i, i] - r[a, j, j]) ** 2
                        for a in range(3)
                    )
                    b_ij = sum(
                        r[a, i, j] * (r[a, i, i] - r[a, j, j]) for a in range(3)
                    )
                    if abs(a_ij) < 1e-14 and abs(b_ij) < 1e-14:
                        continue
                    angle = 0.25 * np.arctan2(b_ij, -a_ij)
                    if abs(angle) < tol:
                        continue
                    biggest = max(biggest, abs(angle))
                    g = np.eye(n)
                    cs, sn = np.cos(angle), np.sin(angle)
                    g[i, i] = g[j, j] = cs
                    g[i, j] = sn
                    g[j, i] = -sn
                    u = u @ g
                    for a in range(3):
                        r[a] = g.T @ r[a] @ g
            if biggest < tol:
                break
        return block @ u

    occ = localize(c[:, : scf.n_occ])
    virt = localize(c[:, scf.n_occ:])
    return np.hstack([occ, virt])


def transform_integrals(hcore: np.ndarray, eri: np.ndarray,
                        coeffs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """AO -> orbital basis for the one- and two-electron integrals."""
    h = coeffs.T @ hcore @ coeffs
    g = np.einsum("pqrs,pi,qj,rk,sl->ijkl", eri, coeffs, coeffs, coeffs, coeffs,
                  optimize=True)
    return h, g


def freeze_core(h: np.ndarray, g: np.ndarray, frozen: list[int],
                active: list[int]) -> tuple[float, np.ndarray, np.ndarray]:
    """Fold doubly occupied frozen orbitals into a core energy and an
    effective one-electron operator over the active orbitals."""
    e_core = 0.0
    for f in frozen:
        e_core += 2.0 * h[f, f]
        for f2 in frozen:
            e_core += 2.0 * g[f, f, f2, f2] - g[f, f2, f2, f]
    n_act = len(active)
    h_eff = np.empty((n_act, n_act))
    for i, p in enumerate(active):
        for j, q in enumerate(active):
            val = h[p, q]
            for f in frozen:
                val += 2.0 * g[p, q, f, f] - g[p, f, f, q]
            h_eff[i, j] = val
    g_act = g[np.ix_(active, active, active, active)]
    return e_core, h_eff, g_act
