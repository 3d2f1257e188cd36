"""Dense statevector kernels and the fixed gate-matrix library.

Index convention is little-endian: the bitstring "q0 q1 ... q(N-1)" maps to
the amplitude index sum_n q_n * 2**n, i.e. qubit 0 is the least significant
bit.  Two-qubit matrices are indexed with the *first* qubit argument as the
more-significant bit of the 2-bit pair index.

Rotation convention: Rg(theta) = exp(-i * theta * G / 2) for G in {X, Y, Z}.

Statevectors are mutated in place by the apply_* kernels (they return the
same object for chaining).  A Statevector must be exclusively owned while it
is being mutated; read-only sharing is safe.  The kernels are compiled with
numba when it is importable and fall back to equivalent numpy slicing
otherwise; both paths are sequential and bitwise deterministic.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

SQRT2_INV = 1.0 / np.sqrt(2.0)

# arity and angle count per gate id
GATE_SIGNATURES: dict[str, tuple[int, int]] = {
    "rx": (1, 1),
    "ry": (1, 1),
    "rz": (1, 1),
    "h": (1, 0),
    "x": (1, 0),
    "cnot": (2, 0),
    "cz": (2, 0),
    "swap": (2, 0),
    "iswap": (2, 0),
    "fsim": (2, 2),
    "a": (2, 2),
    "hop": (2, 1),
}

try:
    if os.environ.get("VQEKIT_PURE_NUMPY"):
        raise ImportError("numba disabled by VQEKIT_PURE_NUMPY")
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised via VQEKIT_PURE_NUMPY
    HAVE_NUMBA = False


@dataclass
class GateMatrix:
    """A fixed 1- or 2-qubit unitary."""

    arity: int
    entries: np.ndarray

    def __post_init__(self) -> None:
        dim = 2**self.arity
        if self.entries.shape != (dim, dim):
            raise ValueError(f"arity {self.arity} gate needs a {dim}x{dim} matrix")


def gate_matrix(name: str, angles: tuple[float, ...] | list[float] = ()) -> np.ndarray:
    """Raw matrix for a library gate; see GATE_SIGNATURES for the gate ids.

    Lookup is case-insensitive ("fSim", "CNOT" and "fsim", "cnot" all work).
    """
    if name not in GATE_SIGNATURES:
        name = name.lower()
    if name not in GATE_SIGNATURES:
        raise ValueError(f"unknown gate {name!r}")
    _, n_angles = GATE_SIGNATURES[name]
    if len(angles) != n_angles:
        raise ValueError(f"gate {name!r} takes {n_angles} angle(s), got {len(angles)}")

    if name == "rx":
        (t,) = angles
        c, s = np.cos(t / 2), np.sin(t / 2)
        return np.array([[c, -1j * s], [-1j * s, c]])
    if name == "ry":
        (t,) = angles
        c, s = np.cos(t / 2), np.sin(t / 2)
        return np.array([[c, -s], [s, c]], dtype=complex)
    if name == "rz":
        (t,) = angles
        return np.array([[np.exp(-1j * t / 2), 0], [0, np.exp(1j * t / 2)]])
    if name == "h":
        return np.array([[1, 1], [1, -1]], dtype=complex) * SQRT2_INV
    if name == "x":
        return np.array([[0, 1], [1, 0]], dtype=complex)
    if name == "cnot":
        return np.array(
            [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
        )
    if name == "cz":
        return np.diag([1, 1, 1, -1]).astype(complex)
    if name == "swap":
        return np.array(
            [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
        )
    if name == "iswap":
        return np.array(
            [[1, 0, 0, 0], [0, 0, 1j, 0], [0, 1j, 0, 0], [0, 0, 0, 1]], dtype=complex
        )
    if name == "fsim":
        theta, phi = angles
        c, s = np.cos(theta), np.sin(theta)
        return np.array(
            [
                [1, 0, 0, 0],
                [0, c, -1j * s, 0],
                [0, -1j * s, c, 0],
                [0, 0, 0, np.exp(-1j * phi)],
            ]
        )
    if name == "a":
        theta, phi = angles
        c, s = np.cos(theta), np.sin(theta)
        return np.array(
            [
                [1, 0, 0, 0],
                [0, c, np.exp(1j * phi) * s, 0],
                [0, np.exp(-1j * phi) * s, -c, 0],
                [0, 0, 0, 1],
            ]
        )
    if name == "hop":
        (phi,) = angles
        c, s = np.cos(phi), np.sin(phi)
        return np.array(
            [[1, 0, 0, 0], [0, c, -s, 0], [0, s, c, 0], [0, 0, 0, -1]], dtype=complex
        )
    raise AssertionError(name)


def gate_library(name: str, angles: tuple[float, ...] | list[float] = ()) -> GateMatrix:
    """Library gate wrapped with its arity."""
    m = gate_matrix(name, angles)
    return GateMatrix(arity=1 if m.shape[0] == 2 else 2, entries=m)


@dataclass
class Statevector:
    """Dense amplitude vector over 2**n_qubits little-endian basis states."""

    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be >= 1")
        if self.amplitudes.shape != (2**self.n_qubits,):
            raise ValueError("amplitude length must be 2**n_qubits")
        if self.amplitudes.dtype != np.complex128:
            self.amplitudes = self.amplitudes.astype(np.complex128)

    def copy(self) -> "Statevector":
        return Statevector(self.n_qubits, self.amplitudes.copy())

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def basis_state(n_qubits: int, bits: str) -> Statevector:
    """Computational basis state from a bitstring "q0 q1 ... q(N-1)"."""
    if len(bits) != n_qubits:
        raise ValueError(f"bitstring length {len(bits)} != n_qubits {n_qubits}")
    if set(bits) - {"0", "1"}:
        raise ValueError(f"bitstring must contain only 0/1, got {bits!r}")
    index = sum(int(b) << n for n, b in enumerate(bits))
    amp = np.zeros(2**n_qubits, dtype=complex)
    amp[index] = 1.0
    return Statevector(n_qubits, amp)


def random_state(n_qubits: int, rng: np.random.Generator) -> Statevector:
    """Haar-ish random normalized state (Gaussian amplitudes)."""
    v = rng.normal(size=2**n_qubits) + 1j * rng.normal(size=2**n_qubits)
    return Statevector(n_qubits, v / np.linalg.norm(v))


# kernels --------------------------------------------------------------------

if HAVE_NUMBA:

    @numba.njit("void(complex128[::1], int64, complex128, complex128, complex128, complex128)",
                cache=True)
    def _k_1q(amp, qubit, m00, m01, m10, m11):
        step = np.int64(1) << qubit
        pair = step << 1
        for base in range(0, amp.shape[0], pair):
            for j in range(base, base + step):
                a0 = amp[j]
                a1 = amp[j + step]
                amp[j] = m00 * a0 + m01 * a1
                amp[j + step] = m10 * a0 + m11 * a1

    @numba.njit("void(complex128[::1], int64, int64, complex128[:, ::1])", cache=True)
    def _k_2q(amp, mask_hi, mask_lo, m):
        both = mask_hi | mask_lo
        for i in range(amp.shape[0]):
            if i & both:
                continue
            i01 = i | mask_lo
            i10 = i | mask_hi
            i11 = i | both
            a0 = amp[i]
            a1 = amp[i01]
            a2 = amp[i10]
            a3 = amp[i11]
            amp[i] = m[0, 0] * a0 + m[0, 1] * a1 + m[0, 2] * a2 + m[0, 3] * a3
            amp[i01] = m[1, 0] * a0 + m[1, 1] * a1 + m[1, 2] * a2 + m[1, 3] * a3
            amp[i10] = m[2, 0] * a0 + m[2, 1] * a1 + m[2, 2] * a2 + m[2, 3] * a3
            amp[i11] = m[3, 0] * a0 + m[3, 1] * a1 + m[3, 2] * a2 + m[3, 3] * a3

    @numba.njit("void(complex128[::1], int64, int64, float64, float64, complex128)",
                cache=True)
    def _k_fsim(amp, mask_a, mask_b, c, s, phase11):
        # |01>/|10> mixing is symmetric, so qubit order does not matter
        both = mask_a | mask_b
        ms = -1j * s
        for i in range(amp.shape[0]):
            if i & both:
                continue
            i01 = i | mask_b
            i10 = i | mask_a
            a1 = amp[i01]
            a2 = amp[i10]
            amp[i01] = c * a1 + ms * a2
            amp[i10] = ms * a1 + c * a2
            amp[i | both] *= phase11

    @numba.njit("void(complex128[::1], int64, complex128, complex128)", cache=True)
    def _k_diag1(amp, qubit, d0, d1):
        step = np.int64(1) << qubit
        pair = step << 1
        for base in range(0, amp.shape[0], pair):
            for j in range(base, base + step):
                amp[j] *= d0
                amp[j + step] *= d1

    @numba.njit("complex128(complex128[::1], complex128[::1], int64, complex128, "
                "complex128, complex128, complex128)", cache=True)
    def _k_overlap_1q(lam, psi, qubit, d00, d01, d10, d11):
        step = np.int64(1) << qubit
        pair = step << 1
        acc = 0.0 + 0.0j
        for base in range(0, lam.shape[0], pair):
            for j in range(base, base + step):
                a0 = psi[j]
                a1 = psi[j + step]
                acc += np.conj(lam[j]) * (d00 * a0 + d01 * a1)
                acc += np.conj(lam[j + step]) * (d10 * a0 + d11 * a1)
        return acc

    @numba.njit("UniTuple(complex128, 2)(complex128[::1], complex128[::1], int64, "
                "int64, float64, float64)", cache=True)
    def _k_overlap_fsim(lam, psi, mask_a, mask_b, theta, phi):
        # both derivative matrices are invariant under the pair-bit swap
        c, s = np.cos(theta), np.sin(theta)
        mic = -1j * c
        dphase = -1j * np.exp(-1j * phi)
        both = mask_a | mask_b
        acc_t = 0.0 + 0.0j
        acc_p = 0.0 + 0.0j
        for i in range(lam.shape[0]):
            if i & both:
                continue
            i01 = i | mask_b
            i10 = i | mask_a
            a1 = psi[i01]
            a2 = psi[i10]
            acc_t += np.conj(lam[i01]) * (-s * a1 + mic * a2)
            acc_t += np.conj(lam[i10]) * (mic * a1 - s * a2)
            i11 = i | both
            acc_p += np.conj(lam[i11]) * dphase * psi[i11]
        return acc_t, acc_p

    @numba.njit("complex128(complex128[::1], complex128[::1], int64, int64, "
                "complex128[:, ::1])", cache=True)
    def _k_overlap_2q(lam, psi, mask_hi, mask_lo, m):
        both = mask_hi | mask_lo
        acc = 0.0 + 0.0j
        for i in range(lam.shape[0]):
            if i & both:
                continue
            i01 = i | mask_lo
            i10 = i | mask_hi
            i11 = i | both
            a0 = psi[i]
            a1 = psi[i01]
            a2 = psi[i10]
            a3 = psi[i11]
            acc += np.conj(lam[i]) * (m[0, 0] * a0 + m[0, 1] * a1 + m[0, 2] * a2 + m[0, 3] * a3)
            acc += np.conj(lam[i01]) * (m[1, 0] * a0 + m[1, 1] * a1 + m[1, 2] * a2 + m[1, 3] * a3)
            acc += np.conj(lam[i10]) * (m[2, 0] * a0 + m[2, 1] * a1 + m[2, 2] * a2 + m[2, 3] * a3)
            acc += np.conj(lam[i11]) * (m[3, 0] * a0 + m[3, 1] * a1 + m[3, 2] * a2 + m[3, 3] * a3)
        return acc


def _np_apply_1q(amp: np.ndarray, qubit: int, m: np.ndarray) -> None:
    a = amp.reshape(-1, 2, 1 << qubit)
    v0 = a[:, 0, :]
    v1 = a[:, 1, :]
    new0 = m[0, 0] * v0 + m[0, 1] * v1
    new1 = m[1, 0] * v0 + m[1, 1] * v1
    a[:, 0, :] = new0
    a[:, 1, :] = new1


def _pair_views(amp: np.ndarray, q_hi: int, q_lo: int) -> tuple[np.ndarray, ...]:
    """Views of the four (bit_hi, bit_lo) amplitude blocks; q_hi > q_lo."""
    low = 1 << q_lo
    mid = 1 << (q_hi - q_lo - 1)
    a = amp.reshape(-1, 2, mid, 2, low)
    return a[:, 0, :, 0, :], a[:, 0, :, 1, :], a[:, 1, :, 0, :], a[:, 1, :, 1, :]


def _np_apply_2q(amp: np.ndarray, q_hi: int, q_lo: int, m: np.ndarray) -> None:
    s00, s01, s10, s11 = _pair_views(amp, q_hi, q_lo)
    new = [
        m[r, 0] * s00 + m[r, 1] * s01 + m[r, 2] * s10 + m[r, 3] * s11 for r in range(4)
    ]
    s00[...], s01[...], s10[...], s11[...] = new


def _check_1q(sv: Statevector, qubit: int) -> None:
    if not 0 <= qubit < sv.n_qubits:
        raise ValueError(f"qubit {qubit} out of range for {sv.n_qubits} qubits")


def _check_2q(sv: Statevector, q_a: int, q_b: int) -> None:
    n = sv.n_qubits
    if q_a == q_b:
        raise ValueError("q_a and q_b must differ")
    if not (0 <= q_a < n and 0 <= q_b < n):
        raise ValueError(f"qubits ({q_a},{q_b}) out of range for {n} qubits")


_PAIR_SWAP = np.array([0, 2, 1, 3])


def _reorder_2q(q_a: int, q_b: int, m: np.ndarray) -> tuple[int, int, np.ndarray]:
    """Matrix in physical (high, low) pair-bit order; q_a is the logical high bit."""
    if q_a > q_b:
        return q_a, q_b, m
    return q_b, q_a, np.ascontiguousarray(m[_PAIR_SWAP][:, _PAIR_SWAP])


def apply_1q(sv: Statevector, qubit: int, g: GateMatrix | np.ndarray) -> Statevector:
    """Apply a single-qubit gate in place; returns sv."""
    m = g.entries if isinstance(g, GateMatrix) else g
    if m.shape != (2, 2):
        raise ValueError("apply_1q needs a 2x2 gate")
    _check_1q(sv, qubit)
    if HAVE_NUMBA:
        _k_1q(sv.amplitudes, qubit, complex(m[0, 0]), complex(m[0, 1]),
              complex(m[1, 0]), complex(m[1, 1]))
    else:
        _np_apply_1q(sv.amplitudes, qubit, m)
    return sv


def apply_2q(
    sv: Statevector, q_a: int, q_b: int, g: GateMatrix | np.ndarray
) -> Statevector:
    """Apply a two-qubit gate in place; q_a indexes the more-significant pair bit."""
    m = g.entries if isinstance(g, GateMatrix) else g
    if m.shape != (4, 4):
        raise ValueError("apply_2q needs a 4x4 gate")
    _check_2q(sv, q_a, q_b)
    q_hi, q_lo, m = _reorder_2q(q_a, q_b, np.asarray(m, dtype=complex))
    if HAVE_NUMBA:
        _k_2q(sv.amplitudes, 1 << q_hi, 1 << q_lo, np.ascontiguousarray(m))
    else:
        _np_apply_2q(sv.amplitudes, q_hi, q_lo, m)
    return sv


def apply_rx(sv: Statevector, qubit: int, theta: float) -> Statevector:
    _check_1q(sv, qubit)
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    if HAVE_NUMBA:
        _k_1q(sv.amplitudes, qubit, complex(c), -1j * s, -1j * s, complex(c))
    else:
        _np_apply_1q(sv.amplitudes, qubit, np.array([[c, -1j * s], [-1j * s, c]]))
    return sv


def apply_ry(sv: Statevector, qubit: int, theta: float) -> Statevector:
    _check_1q(sv, qubit)
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    if HAVE_NUMBA:
        _k_1q(sv.amplitudes, qubit, complex(c), complex(-s), complex(s), complex(c))
    else:
        _np_apply_1q(sv.amplitudes, qubit, np.array([[c, -s], [s, c]], dtype=complex))
    return sv


def apply_rz(sv: Statevector, qubit: int, theta: float) -> Statevector:
    """Fast path for the diagonal Rz gate."""
    _check_1q(sv, qubit)
    d0 = np.exp(-1j * theta / 2)
    d1 = np.exp(1j * theta / 2)
    if HAVE_NUMBA:
        _k_diag1(sv.amplitudes, qubit, d0, d1)
    else:
        a = sv.amplitudes.reshape(-1, 2, 1 << qubit)
        a[:, 0, :] *= d0
        a[:, 1, :] *= d1
    return sv


def apply_fsim(sv: Statevector, q_a: int, q_b: int, theta: float, phi: float) -> Statevector:
    """Fast path for the fSim gate (only |01>/|10> mix, |11> phases)."""
    _check_2q(sv, q_a, q_b)
    c, s = np.cos(theta), np.sin(theta)
    phase = np.exp(-1j * phi)
    if HAVE_NUMBA:
        _k_fsim(sv.amplitudes, 1 << q_a, 1 << q_b, c, s, phase)
    else:
        q_hi, q_lo = (q_a, q_b) if q_a > q_b else (q_b, q_a)
        _, s01, s10, s11 = _pair_views(sv.amplitudes, q_hi, q_lo)
        new01 = c * s01 - 1j * s * s10
        new10 = -1j * s * s01 + c * s10
        s01[...] = new01
        s10[...] = new10
        s11 *= phase
    return sv


def overlap_1q(lam: Statevector, psi: Statevector, qubit: int, d: np.ndarray) -> complex:
    """<lam| (d acting on one qubit) |psi> without materializing d|psi>."""
    _check_1q(psi, qubit)
    return overlap_1q_scalars(lam, psi, qubit,
                              complex(d[0, 0]), complex(d[0, 1]),
                              complex(d[1, 0]), complex(d[1, 1]))


def overlap_1q_scalars(lam: Statevector, psi: Statevector, qubit: int,
                       d00: complex, d01: complex, d10: complex, d11: complex) -> complex:
    if HAVE_NUMBA:
        return complex(
            _k_overlap_1q(lam.amplitudes, psi.amplitudes, qubit, d00, d01, d10, d11)
        )
    mu = psi.copy()
    _np_apply_1q(mu.amplitudes, qubit, np.array([[d00, d01], [d10, d11]]))
    return complex(np.vdot(lam.amplitudes, mu.amplitudes))


def overlap_fsim_derivatives(lam: Statevector, psi: Statevector, q_a: int, q_b: int,
                             theta: float, phi: float) -> tuple[complex, complex]:
    """(<lam|dU/dtheta|psi>, <lam|dU/dphi|psi>) for the fSim gate."""
    _check_2q(psi, q_a, q_b)
    if HAVE_NUMBA:
        t, p = _k_overlap_fsim(lam.amplitudes, psi.amplitudes, 1 << q_a, 1 << q_b,
                               theta, phi)
        return complex(t), complex(p)
    c, s = np.cos(theta), np.sin(theta)
    d_theta = np.array(
        [[0, 0, 0, 0], [0, -s, -1j * c, 0], [0, -1j * c, -s, 0], [0, 0, 0, 0]]
    )
    d_phi = np.diag([0, 0, 0, -1j * np.exp(-1j * phi)])
    return (overlap_2q(lam, psi, q_a, q_b, d_theta),
            overlap_2q(lam, psi, q_a, q_b, d_phi))


def overlap_2q(lam: Statevector, psi: Statevector, q_a: int, q_b: int,
               d: np.ndarray) -> complex:
    """<lam| (d acting on a qubit pair) |psi>; q_a is the high pair bit."""
    _check_2q(psi, q_a, q_b)
    q_hi, q_lo, m = _reorder_2q(q_a, q_b, np.asarray(d, dtype=complex))
    if HAVE_NUMBA:
        return complex(
            _k_overlap_2q(lam.amplitudes, psi.amplitudes, 1 << q_hi, 1 << q_lo,
                          np.ascontiguousarray(m))
        )
    mu = psi.copy()
    _np_apply_2q(mu.amplitudes, q_hi, q_lo, m)
    return complex(np.vdot(lam.amplitudes, mu.amplitudes))


def inner_product(a: Statevector, b: Statevector) -> complex:
    """<a|b> with conjugation on a."""
    if a.n_qubits != b.n_qubits:
        raise ValueError("statevector sizes differ")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def fidelity(a: Statevector, b: Statevector) -> float:
    """|<a|b>|^2."""
    return abs(inner_product(a, b)) ** 2
