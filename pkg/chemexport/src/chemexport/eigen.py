"""Matrix-free exact diagonalization of Pauli-term Hamiltonians, used to
stamp FCI reference energies into the exported files."""

from __future__ import annotations

import numpy as np
import scipy.linalg
import scipy.sparse.linalg

_DENSE_MAX_QUBITS = 10


def _compiled_terms(terms: list[tuple[float, str]], n_qubits: int):
    """Collapse diagonal terms into one vector and group flips by mask."""
    dim = 1 << n_qubits
    idx = np.arange(dim, dtype=np.int64)
    diag = np.zeros(dim)
    groups: dict[int, np.ndarray] = {}
    for coeff, letters in terms:
        x_mask = 0
        zy_mask = 0
        n_y = 0
        for n, letter in enumerate(letters):
            if letter in "XY":
                x_mask |= 1 << n
            if letter in "YZ":
                zy_mask |= 1 << n
            if letter == "Y":
                n_y += 1
        signs = 1.0 - 2.0 * (np.bitwise_count(idx & zy_mask) & 1)
        weight = coeff * (1j**n_y) * signs
        if x_mask == 0:
            diag += weight.real
        else:
            groups.setdefault(x_mask, np.zeros(dim, dtype=complex))
            groups[x_mask] += weight
    return diag, [(idx ^ x, w) for x, w in sorted(groups.items())]


def ground_state_energy(terms: list[tuple[float, str]], n_qubits: int,
                        return_state: bool = False):
    diag, flips = _compiled_terms(terms, n_qubits)
    dim = 1 << n_qubits

    def matvec(vec: np.ndarray) -> np.ndarray:
        out = diag * vec
        for target, weight in flips:
            out[target] += weight * vec
        return out

    if n_qubits <= _DENSE_MAX_QUBITS:
        m = np.zeros((dim, dim), dtype=complex)
        idx = np.arange(dim)
        m[idx, idx] = diag
        for target, weight in flips:
            m[target, idx] += weight
        vals, vecs = scipy.linalg.eigh(m, subset_by_index=[0, 0])
        energy, state = float(vals[0]), vecs[:, 0]
    else:
        op = scipy.sparse.linalg.LinearOperator((dim, dim), matvec=matvec,
                                                dtype=complex)
        v0 = np.random.default_rng(11).normal(size=dim)
        vals, vecs = scipy.sparse.linalg.eigsh(op, k=1, which="SA", v0=v0,
                                               maxiter=5000)
        energy, state = float(vals[0]), vecs[:, 0]
    residual = float(np.linalg.norm(matvec(state) - energy * state))
    if residual > 1e-7:
        raise RuntimeError(f"eigensolver residual {residual:.2e} too large")
    if return_state:
        return energy, state
    return energy


def expectation(terms: list[tuple[float, str]], n_qubits: int,
                state: np.ndarray) -> float:
    diag, flips = _compiled_terms(terms, n_qubits)
    out = diag * state
    for target, weight in flips:
        out[target] += weight * state
    return float(np.vdot(state, out).real)
