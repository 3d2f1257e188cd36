"""Restricted Hartree-Fock with DIIS."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .basis import Molecule


class ScfError(RuntimeError):
    """SCF failed to converge; the message carries the diagnostics."""


@dataclass
class ScfResult:
    energy: float
    mo_coeffs: np.ndarray  # AO x MO
    mo_energies: np.ndarray
    density: np.ndarray
    overlap: np.ndarray
    hcore: np.ndarray
    eri: np.ndarray
    n_occ: int


def _fock(hcore: np.ndarray, eri: np.ndarray, density: np.ndarray) -> np.ndarray:
    j = np.einsum("pqrs,rs->pq", eri, density)
    k = np.einsum("prqs,rs->pq", eri, density)
    return hcore + j - 0.5 * k


def restricted_hartree_fock(
    mol: Molecule,
    s: np.ndarray,
    t: np.ndarray,
    v: np.ndarray,
    eri: np.ndarray,
    max_cycles: int = 200,
    conv_tol: float = 1e-10,
) -> ScfResult:
    if mol.n_electrons % 2 != 0:
        raise ScfError("restricted SCF needs an even electron count")
    n_occ = mol.n_electrons // 2
    hcore = t + v
    x = scipy.linalg.fractional_matrix_power(s, -0.5).real

    def diagonalize(f):
        fp = x @ f @ x
        energies, cp = np.linalg.eigh(fp)
        c = x @ cp
        return energies, c

    energies, c = diagonalize(hcore)
    density = 2.0 * c[:, :n_occ] @ c[:, :n_occ].T
    e_old = 0.0
    errors: list[np.ndarray] = []
    focks: list[np.ndarray] = []
    for cycle in range(1, max_cycles + 1):
        f = _fock(hcore, eri, density)
        # DIIS on the orthonormal-basis gradient FDS - SDF
        err = x @ (f @ density @ s - s @ density @ f) @ x
        errors.append(err)
        focks.append(f)
        if len(errors) > 8:
            errors.pop(0)
            focks.pop(0)
        if len(errors) > 1:
            m = len(errors)
            b = -np.ones((m + 1, m + 1))
            b[m, m] = 0.0
            for i in range(m):
                for j in range(m):
                    b[i, j] = np.sum(errors[i] * errors[j])
            rhs = np.zeros(m + 1)
            rhs[m] = -1.0
            try:
                weights = np.linalg.solve(b, rhs)[:m]
                f = sum(w * fk for w, fk in zip(weights, focks))
            except np.linalg.LinAlgError:
                pass
        energies, c = diagonalize(f)
        density = 2.0 * c[:, :n_occ] @ c[:, :n_occ].T
        e_elec = 0.5 * np.sum(density * (hcore + _fock(hcore, eri, density)))
        e_total = e_elec + mol.nuclear_repulsion()
        grad_norm = float(np.max(np.abs(errors[-1])))
        if abs(e_total - e_old) < conv_tol and grad_norm < 1e-7:
            return ScfResult(e_total, c, energies, density, s, hcore, eri, n_occ)
        e_old = e_total
    raise ScfError(
        f"SCF did not converge in {max_cycles} cycles "
        f"(last energy {e_old:.10f}, gradient {grad_norm:.2e})"
    )
