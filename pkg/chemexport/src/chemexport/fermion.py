"""Second-quantized operators over interleaved spin orbitals and their
Jordan-Wigner images as real-weighted Pauli strings.

Spin-orbital ordering: qubit 2p holds the up spin of spatial orbital p,
qubit 2p+1 the down spin (occupation-number-vector convention).
"""

from __future__ import annotations

import numpy as np

# single-letter Pauli products: (left, right) -> (phase, letter)
_MUL = {
    ("I", "I"): (1, "I"), ("I", "X"): (1, "X"), ("I", "Y"): (1, "Y"), ("I", "Z"): (1, "Z"),
    ("X", "I"): (1, "X"), ("Y", "I"): (1, "Y"), ("Z", "I"): (1, "Z"),
    ("X", "X"): (1, "I"), ("Y", "Y"): (1, "I"), ("Z", "Z"): (1, "I"),
    ("X", "Y"): (1j, "Z"), ("Y", "X"): (-1j, "Z"),
    ("Y", "Z"): (1j, "X"), ("Z", "Y"): (-1j, "X"),
    ("Z", "X"): (1j, "Y"), ("X", "Z"): (-1j, "Y"),
}

PauliPolynomial = dict[str, complex]


def multiply_strings(s1: str, s2: str) -> tuple[complex, str]:
    phase = 1.0 + 0.0j
    letters = []
    for a, b in zip(s1, s2):
        ph, letter = _MUL[(a, b)]
        phase *= ph
        letters.append(letter)
    return phase, "".join(letters)


def poly_multiply(p1: PauliPolynomial, p2: PauliPolynomial) -> PauliPolynomial:
    out: PauliPolynomial = {}
    for s1, c1 in p1.items():
        for s2, c2 in p2.items():
            phase, s = multiply_strings(s1, s2)
            out[s] = out.get(s, 0.0) + c1 * c2 * phase
    return out


def poly_add(acc: PauliPolynomial, p: PauliPolynomial, scale: complex = 1.0) -> None:
    for s, c in p.items():
        acc[s] = acc.get(s, 0.0) + scale * c


def jordan_wigner_ladder(index: int, n_qubits: int, creation: bool) -> PauliPolynomial:
    """a_index^(dagger) = Z_0..Z_{index-1} (X -+ iY)_index / 2."""
    z_part = "Z" * index
    pad = "I" * (n_qubits - index - 1)
    x_string = z_part + "X" + pad
    y_string = z_part + "Y" + pad
    sign = -0.5j if creation else 0.5j
    return {x_string: 0.5, y_string: sign}


def _ladder_product(n_qubits: int, *ops: tuple[int, bool]) -> PauliPolynomial:
    poly: PauliPolynomial = {"I" * n_qubits: 1.0}
    for index, creation in ops:
        poly = poly_multiply(poly, jordan_wigner_ladder(index, n_qubits, creation))
    return poly


def qubit_hamiltonian(
    h: np.ndarray,
    g: np.ndarray,
    e_const: float,
    threshold: float = 1e-12,
) -> list[tuple[float, str]]:
    """Jordan-Wigner image of E + sum h_pq a+_p a_q + 1/2 sum (pq|rs)
    a+_ps a+_rt a_st a_qs over interleaved spin orbitals (chemists' ERIs)."""
    n_spatial = h.shape[0]
    n_qubits = 2 * n_spatial
    acc: PauliPolynomial = {"I" * n_qubits: complex(e_const)}
    for p in range(n_spatial):
        for q in range(n_spatial):
            if abs(h[p, q]) > threshold:
                for spin in (0, 1):
                    poly = _ladder_product(n_qubits, (2 * p + spin, True),
                                           (2 * q + spin, False))
                    poly_add(acc, poly, h[p, q])
    for p in range(n_spatial):
        for q in range(n_spatial):
            for r in range(n_spatial):
                for s in range(n_spatial):
                    coeff = g[p, q, r, s]
                    if abs(coeff) <= threshold:
                        continue
                    for s1 in (0, 1):
                        for s2 in (0, 1):
                            i, j = 2 * p + s1, 2 * r + s2
                            k, l = 2 * s + s2, 2 * q + s1
                            if i == j or k == l:
                                continue  # a+a+ or aa on the same mode
                            poly = _ladder_product(
                                n_qubits, (i, True), (j, True), (k, False), (l, False)
                            )
                            poly_add(acc, poly, 0.5 * coeff)
    return _realify(acc, threshold)


def spin_raising_lowering_penalty(
    n_spatial: int, beta: float, threshold: float = 1e-12
) -> list[tuple[float, str]]:
    """beta * S+ S- with S+ = sum_p a+_{p,up} a_{p,down}."""
    n_qubits = 2 * n_spatial
    acc: PauliPolynomial = {}
    for p in range(n_spatial):
        for q in range(n_spatial):
            poly = _ladder_product(
                n_qubits,
                (2 * p, True), (2 * p + 1, False),
                (2 * q + 1, True), (2 * q, False),
            )
            poly_add(acc, poly, beta)
    return _realify(acc, threshold)


def number_penalty_terms(
    n_spatial: int, n_up: int, n_down: int, beta: float
) -> list[tuple[float, str]]:
    """beta*(N_up - n_up)^2 + beta*(N_down - n_down)^2, expanded."""
    n_qubits = 2 * n_spatial
    acc: PauliPolynomial = {}
    for parity, target in ((0, n_up), (1, n_down)):
        qs = list(range(parity, n_qubits, 2))
        c0 = len(qs) / 2.0 - target

        def z_string(bits):
            s = ["I"] * n_qubits
            for b in bits:
                s[b] = "Z"
            return "".join(s)

        poly_add(acc, {z_string(()): beta * (c0**2 + len(qs) / 4.0)})
        for q in qs:
            poly_add(acc, {z_string((q,)): -beta * c0})
        for a in range(len(qs)):
            for b in range(a + 1, len(qs)):
                poly_add(acc, {z_string((qs[a], qs[b])): beta / 2.0})
    return _realify(acc, 1e-15)


def _realify(acc: PauliPolynomial, threshold: float) -> list[tuple[float, str]]:
    """Hermitian operators must come out with real coefficients."""
    out = []
    for letters in sorted(acc):
        coeff = acc[letters]
        if abs(coeff.imag) > 1e-9:
            raise RuntimeError(
                f"non-real coefficient {coeff} on {letters}: operator not Hermitian"
            )
        if abs(coeff.real) > threshold:
            out.append((float(coeff.real), letters))
    return out


def hartree_fock_bitstring(n_spatial: int, n_alpha: int, n_beta: int) -> str:
    bits = ["0"] * (2 * n_spatial)
    for p in range(n_alpha):
        bits[2 * p] = "1"
    for p in range(n_beta):
        bits[2 * p + 1] = "1"
    return "".join(bits)


def neel_bitstring(n_spatial: int) -> str:
    """Alternating up/down occupation over sites (OAO hydrogen chains)."""
    bits = []
    for p in range(n_spatial):
        bits += ["1", "0"] if p % 2 == 0 else ["0", "1"]
    return "".join(bits)
