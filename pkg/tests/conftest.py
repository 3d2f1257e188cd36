import os
from pathlib import Path

import numpy as np
import pytest

from vqekit import AnsatzKind, PauliSum, build_ansatz

REPO_ROOT = Path(__file__).resolve().parent.parent
FIXTURES = REPO_ROOT / "fixtures"

PAULI_1Q = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]]),
    "Z": np.diag([1, -1]).astype(complex),
}


def dense_pauli_string(letters: str) -> np.ndarray:
    """Independent dense oracle: qubit 0 is the least significant factor."""
    m = np.array([[1.0 + 0j]])
    for letter in reversed(letters):
        m = np.kron(m, PAULI_1Q[letter])
    return m


def dense_pauli_sum(h: PauliSum) -> np.ndarray:
    dim = 2**h.n_qubits
    out = np.zeros((dim, dim), dtype=complex)
    for coeff, letters in h.terms:
        out += coeff * dense_pauli_string(letters)
    return out


def random_pauli_sum(n_qubits: int, n_terms: int, rng: np.random.Generator) -> PauliSum:
    terms = []
    for _ in range(n_terms):
        letters = "".join(rng.choice(list("IXYZ"), size=n_qubits))
        terms.append((float(rng.normal()), letters))
    return PauliSum(n_qubits, terms)


def random_kind_circuit(rng: np.random.Generator, max_qubits: int = 6, max_layers: int = 3):
    kind = rng.choice(list(AnsatzKind))
    n = int(rng.integers(2, max_qubits + 1))
    L = int(rng.integers(1, max_layers + 1))
    return kind, build_ansatz(kind, n, L)


def run_extended() -> bool:
    return bool(os.environ.get("VQEKIT_EXTENDED"))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
