"""Pauli-string Hamiltonians: construction, expectation values, exact
diagonalization, and the Hamiltonian JSON file format.

A PauliSum stores real-weighted N-qubit Pauli strings ("letters", position n
acts on qubit n).  Real coefficients make every stored operator Hermitian.
PauliSum instances are treated as immutable after construction; the lazily
built application tables are safe to share between readers.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np
import scipy.linalg
import scipy.sparse.linalg

from .statevector import Statevector

PAULI_LETTERS = frozenset("IXYZ")

_DENSE_SOLVER_MAX_QUBITS = 12
_MAX_QUBITS = 20
_EIGEN_RESIDUAL_TOL = 1e-8


class HamiltonianFormatError(ValueError):
    """Raised when a Hamiltonian file violates the JSON schema."""


def _validate_letters(letters: str, n_qubits: int, where: str) -> None:
    if len(letters) != n_qubits:
        raise ValueError(f"{where}: string {letters!r} has length {len(letters)}, expected {n_qubits}")
    if set(letters) - PAULI_LETTERS:
        raise ValueError(f"{where}: string {letters!r} contains letters outside IXYZ")


@dataclass
class PauliSum:
    """Real-weighted sum of Pauli strings on a fixed qubit count."""

    n_qubits: int
    terms: list[tuple[float, str]]
    _tables: dict | None = field(default=None, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be >= 1")
        clean: list[tuple[float, str]] = []
        for i, (coeff, letters) in enumerate(self.terms):
            coeff = float(coeff)
            if not math.isfinite(coeff):
                raise ValueError(f"term {i}: coefficient {coeff} is not finite")
            _validate_letters(letters, self.n_qubits, f"term {i}")
            clean.append((coeff, letters))
        self.terms = clean

    def merged(self) -> "PauliSum":
        """Sum duplicate strings and drop terms with zero coefficient."""
        acc: dict[str, float] = {}
        for coeff, letters in self.terms:
            acc[letters] = acc.get(letters, 0.0) + coeff
        return PauliSum(self.n_qubits, [(c, s) for s, c in acc.items() if c != 0.0])

    # amplitude-index machinery -------------------------------------------

    def _compiled(self) -> dict:
        """Per-term masks, with diagonal terms collapsed and off-diagonal
        terms grouped by flip mask (one gather per group)."""
        if self._tables is None:
            dim = 1 << self.n_qubits
            idx = np.arange(dim, dtype=np.int64)
            diag = np.zeros(dim)
            groups: dict[int, np.ndarray] = {}
            for coeff, letters in self.terms:
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
                    if x_mask not in groups:
                        groups[x_mask] = np.zeros(dim, dtype=complex)
                    groups[x_mask] += weight
            self._tables = {
                "diag": diag,
                "flips": [(idx ^ x, w) for x, w in sorted(groups.items())],
            }
        return self._tables

    def apply(self, vec: np.ndarray) -> np.ndarray:
        """Matrix-free H @ vec over the 2**n_qubits amplitude vector."""
        t = self._compiled()
        out = t["diag"] * vec
        for target, weight in t["flips"]:
            out[target] += weight * vec
        return out

    def dense_matrix(self) -> np.ndarray:
        """Dense 2**N x 2**N matrix; oracle/solver use only."""
        dim = 1 << self.n_qubits
        idx = np.arange(dim, dtype=np.int64)
        out = np.zeros((dim, dim), dtype=complex)
        t = self._compiled()
        out[idx, idx] = t["diag"]
        for target, weight in t["flips"]:
            out[target, idx] += weight
        return out


def expectation(h: PauliSum, sv: Statevector) -> float:
    """<sv|H|sv>; the imaginary residue must stay below 1e-10."""
    if h.n_qubits != sv.n_qubits:
        raise ValueError(f"Hamiltonian on {h.n_qubits} qubits, state on {sv.n_qubits}")
    val = complex(np.vdot(sv.amplitudes, h.apply(sv.amplitudes)))
    if abs(val.imag) > 1e-10:
        raise RuntimeError(
            f"expectation has imaginary residue {val.imag:.3e}; operator is not Hermitian"
        )
    return val.real


def heisenberg_1d(n_sites: int, J: float) -> PauliSum:
    """Open-boundary 1D Heisenberg chain, -J/2 * sum_n sigma_n . sigma_n+1."""
    if n_sites < 2:
        raise ValueError("heisenberg_1d needs at least 2 sites")
    coeff = -J / 2.0
    terms = []
    for n in range(n_sites - 1):
        for letter in "XYZ":
            s = ["I"] * n_sites
            s[n] = letter
            s[n + 1] = letter
            terms.append((coeff, "".join(s)))
    return PauliSum(n_sites, terms)


def disjoint_union(a: PauliSum, b: PauliSum) -> PauliSum:
    """Noninteracting composite: a on qubits 0..n_a-1, b shifted up by n_a."""
    n = a.n_qubits + b.n_qubits
    pad_a = "I" * b.n_qubits
    pad_b = "I" * a.n_qubits
    terms = [(c, s + pad_a) for c, s in a.terms]
    terms += [(c, pad_b + s) for c, s in b.terms]
    return PauliSum(n, terms)


def number_penalty(n_qubits: int, n_up: int, n_down: int, beta: float) -> PauliSum:
    """beta*(N_up - n_up)^2 + beta*(N_down - n_down)^2 in expanded Pauli form.

    Spin-orbital ordering is interleaved: even qubits carry up spins, odd
    qubits carry down spins; N_sigma = sum_q (I - Z_q)/2 over that parity.
    """
    if n_qubits % 2 != 0:
        raise ValueError("number_penalty needs an even qubit count")
    terms: list[tuple[float, str]] = []

    def z_string(qubits: Iterable[int]) -> str:
        s = ["I"] * n_qubits
        for q in qubits:
            s[q] = "Z"
        return "".join(s)

    for parity, n_target in ((0, n_up), (1, n_down)):
        qs = list(range(parity, n_qubits, 2))
        c0 = len(qs) / 2.0 - n_target
        # (c0*I - 1/2 sum Z_q)^2 with Z_q^2 = I merged away
        terms.append((beta * (c0**2 + len(qs) / 4.0), z_string(())))
        for q in qs:
            terms.append((-beta * c0, z_string((q,))))
        for i, p in enumerate(qs):
            for q in qs[i + 1 :]:
                terms.append((beta / 2.0, z_string((p, q))))
    return PauliSum(n_qubits, terms).merged()


def exact_ground_state(
    h: PauliSum, method: str = "auto"
) -> tuple[float, Statevector]:
    """Lowest eigenpair; dense solver up to 12 qubits, Lanczos-type above.

    method forces a path ("dense" / "iterative") for cross-checks.
    """
    if h.n_qubits > _MAX_QUBITS:
        raise ValueError(f"exact_ground_state supports at most {_MAX_QUBITS} qubits")
    if method not in ("auto", "dense", "iterative"):
        raise ValueError(f"unknown method {method!r}")
    dim = 1 << h.n_qubits
    if method == "auto":
        method = "dense" if h.n_qubits <= _DENSE_SOLVER_MAX_QUBITS else "iterative"
    if method == "dense":
        m = h.dense_matrix()
        vals, vecs = scipy.linalg.eigh(m, subset_by_index=[0, 0])
        energy = float(vals[0])
        vec = vecs[:, 0].astype(complex)
    else:
        op = scipy.sparse.linalg.LinearOperator(
            (dim, dim), matvec=h.apply, dtype=complex
        )
        v0 = np.random.default_rng(7).normal(size=dim)
        try:
            vals, vecs = scipy.sparse.linalg.eigsh(op, k=1, which="SA", v0=v0)
        except scipy.sparse.linalg.ArpackNoConvergence as exc:
            raise RuntimeError(f"iterative eigensolver did not converge: {exc}") from exc
        energy = float(vals[0])
        vec = vecs[:, 0].astype(complex)
    vec /= np.linalg.norm(vec)
    residual = float(np.linalg.norm(h.apply(vec) - energy * vec))
    if residual > _EIGEN_RESIDUAL_TOL:
        raise RuntimeError(f"eigenpair residual {residual:.3e} exceeds {_EIGEN_RESIDUAL_TOL}")
    return energy, Statevector(h.n_qubits, vec)


# Hamiltonian file format --------------------------------------------------

FORMAT_VERSION = 1


@dataclass
class HamiltonianFile:
    """On-disk Hamiltonian: terms plus free-form metadata."""

    n_qubits: int
    terms: list[tuple[float, str]]
    metadata: dict
    format_version: int = FORMAT_VERSION

    def to_pauli_sum(self) -> PauliSum:
        return PauliSum(self.n_qubits, list(self.terms))


def save_hamiltonian(h: HamiltonianFile, path) -> None:
    doc = {
        "format_version": h.format_version,
        "n_qubits": h.n_qubits,
        "terms": [{"pauli": s, "coeff": c} for c, s in h.terms],
        "metadata": h.metadata,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def load_hamiltonian(path) -> HamiltonianFile:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict):
        raise HamiltonianFormatError("top-level JSON value must be an object")
    for key in ("format_version", "n_qubits", "terms"):
        if key not in doc:
            raise HamiltonianFormatError(f"missing required key {key!r}")
    if doc["format_version"] != FORMAT_VERSION:
        raise HamiltonianFormatError(f"unsupported format_version {doc['format_version']!r}")
    n_qubits = doc["n_qubits"]
    if not isinstance(n_qubits, int) or n_qubits < 1:
        raise HamiltonianFormatError(f"n_qubits must be a positive integer, got {n_qubits!r}")
    terms: list[tuple[float, str]] = []
    for i, entry in enumerate(doc["terms"]):
        if not isinstance(entry, dict) or "pauli" not in entry or "coeff" not in entry:
            raise HamiltonianFormatError(f"term {i}: each term needs 'pauli' and 'coeff'")
        letters = entry["pauli"]
        coeff = entry["coeff"]
        if not isinstance(letters, str):
            raise HamiltonianFormatError(f"term {i}: 'pauli' must be a string")
        if isinstance(coeff, bool) or not isinstance(coeff, (int, float)):
            raise HamiltonianFormatError(
                f"term {i}: coefficient must be a real number (complex coefficients "
                f"break the Hermiticity contract), got {coeff!r}"
            )
        if not math.isfinite(coeff):
            raise HamiltonianFormatError(f"term {i}: coefficient {coeff!r} is not finite")
        try:
            _validate_letters(letters, n_qubits, f"term {i}")
        except ValueError as exc:
            raise HamiltonianFormatError(str(exc)) from exc
        terms.append((float(coeff), letters))
    metadata = doc.get("metadata", {})
    if not isinstance(metadata, dict):
        raise HamiltonianFormatError("metadata must be an object")
    return HamiltonianFile(n_qubits=n_qubits, terms=terms, metadata=metadata)
