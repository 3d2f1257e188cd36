"""Circuit IR with linear parameter expressions and the ansatz builders.

Six layered ansatz families are supported: ry_linear, ry_full, ry_rz_full
(the Ry/RyRz heuristics with an extra leading rotation column), aswap
(particle-number conserving A-gate brickwork), and the staircase families
xyz1f / xyz2f whose repeating unit is

    [Rx(a_n) Ry(b_n) per qubit] [U2 staircase down] [Rz column]
    [mirrored U2 staircase up, daggered] [Ry(-b_n) Rx(-a_n) per qubit]

with U2(theta, phi) = [I x Ry(phi/2)] fSim(theta, phi) [I x Ry(-phi/2)]
acting on each nearest-neighbor bond (wrappers on the higher-index qubit).
xyz2f places one Rz on every qubit; xyz1f keeps a single Rz on the last
qubit.  The mirrored half reuses the opening parameters through negated
linear expressions, which is what keeps the layer an exact exponential of a
Pauli string for the compiled parameter assignments (see
compile_pauli_rotation) and makes the all-zero layer the identity.

Parameter layout per layer (documented order, also used by the file-level
embedding helpers):

    xyz1f/xyz2f: a_0..a_{N-1}, b_0..b_{N-1}, theta_0..theta_{N-2},
                 phi_0..phi_{N-2}, gamma (one per qubit for xyz2f, a single
                 trailing gamma for xyz1f)
    aswap:       theta, phi per A gate in emission order (even bonds, then
                 odd bonds)
    ry kinds:    one angle per rotation gate in emission order; the initial
                 column precedes layer 1
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .statevector import (
    GATE_SIGNATURES,
    Statevector,
    apply_1q,
    apply_2q,
    apply_fsim,
    apply_rx,
    apply_ry,
    apply_rz,
    gate_matrix,
)


class AnsatzKind(enum.Enum):
    RY_LINEAR = "ry_linear"
    RY_FULL = "ry_full"
    RY_RZ_FULL = "ry_rz_full"
    ASWAP = "aswap"
    XYZ1F = "xyz1f"
    XYZ2F = "xyz2f"

    @classmethod
    def parse(cls, name: str) -> "AnsatzKind":
        key = name.strip().lower().replace("-", "_")
        for kind in cls:
            if kind.value == key:
                return kind
        raise ValueError(f"unknown ansatz kind {name!r}; choose from "
                         f"{[k.value for k in cls]}")


@dataclass(frozen=True)
class ParamExpr:
    """angle = coefficient * params[index] + constant; index None = fixed."""

    index: int | None
    coefficient: float = 1.0
    constant: float = 0.0

    def __post_init__(self) -> None:
        if self.index is not None and self.coefficient == 0.0:
            raise ValueError("parameterized expression needs a nonzero coefficient")

    def evaluate(self, params: np.ndarray) -> float:
        if self.index is None:
            return self.constant
        return self.coefficient * float(params[self.index]) + self.constant

    def text(self) -> str:
        if self.index is None:
            return f"{self.constant:.12g}"
        s = f"{self.coefficient:g}*p{self.index}"
        if self.constant != 0.0:
            s += f"{self.constant:+.12g}"
        return s


@dataclass(frozen=True)
class GateOp:
    kind: str
    qubits: tuple[int, ...]
    angle_exprs: tuple[ParamExpr, ...] = ()

    def __post_init__(self) -> None:
        arity, n_angles = GATE_SIGNATURES[self.kind]
        if len(self.qubits) != arity:
            raise ValueError(f"{self.kind} acts on {arity} qubit(s)")
        if len(self.angle_exprs) != n_angles:
            raise ValueError(f"{self.kind} takes {n_angles} angle(s)")


# (layer, site_kind, site_index): layer 0 is the initial rotation column of
# the ry families; site_index is a qubit or bond index depending on the tag.
ParamSite = tuple[int, str, int]


@dataclass
class Circuit:
    """Ordered gate list over a shared parameter vector."""

    n_qubits: int
    n_params: int
    ops: list[GateOp]
    layer_boundaries: list[int]
    param_sites: list[ParamSite] = field(default_factory=list)
    _table: tuple | None = field(default=None, repr=False, compare=False)

    @property
    def n_layers(self) -> int:
        return len(self.layer_boundaries) - 1

    def _expr_table(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Flattened angle expressions (index, coefficient, constant) in op
        order; index n_params points at a zero pad for fixed angles."""
        if self._table is None:
            idx, coeff, const = [], [], []
            for op in self.ops:
                for expr in op.angle_exprs:
                    idx.append(self.n_params if expr.index is None else expr.index)
                    coeff.append(expr.coefficient)
                    const.append(expr.constant)
            self._table = (
                np.asarray(idx, dtype=np.int64),
                np.asarray(coeff),
                np.asarray(const),
            )
        return self._table

    def evaluate_angles(self, params: np.ndarray) -> np.ndarray:
        """All op angles, flattened in op order."""
        idx, coeff, const = self._expr_table()
        padded = np.append(params, 0.0)
        return coeff * padded[idx] + const

    def first_param_of_layer(self, layer: int) -> int:
        """Lowest parameter index introduced by the given repeating unit."""
        candidates = [i for i, (lay, _, _) in enumerate(self.param_sites) if lay == layer]
        if not candidates:
            raise ValueError(f"layer {layer} introduces no parameters")
        return min(candidates)

    def validate(self) -> None:
        seen = np.zeros(self.n_params, dtype=bool)
        for op in self.ops:
            for expr in op.angle_exprs:
                if expr.index is not None:
                    if not 0 <= expr.index < self.n_params:
                        raise ValueError(f"parameter index {expr.index} out of range")
                    seen[expr.index] = True
        if not seen.all():
            missing = np.nonzero(~seen)[0]
            raise ValueError(f"parameters never referenced: {missing.tolist()}")
        if len(self.param_sites) != self.n_params:
            raise ValueError("param_sites must describe every parameter")

    def text(self) -> str:
        """Debug dump, one op per line: "kind q[,q] angle-expr...". """
        lines = []
        for op in self.ops:
            parts = [op.kind, ",".join(str(q) for q in op.qubits)]
            parts += [expr.text() for expr in op.angle_exprs]
            lines.append(" ".join(parts))
        return "\n".join(lines)


def run(circuit: Circuit, params: Sequence[float], reference: Statevector) -> Statevector:
    """Apply the circuit's gates in list order to a copy of the reference."""
    params = np.asarray(params, dtype=float)
    if params.shape != (circuit.n_params,):
        raise ValueError(f"expected {circuit.n_params} parameters, got {params.shape}")
    if reference.n_qubits != circuit.n_qubits:
        raise ValueError("reference qubit count does not match the circuit")
    sv = reference.copy()
    angles = circuit.evaluate_angles(params)
    pos = 0
    for op in circuit.ops:
        n_angles = len(op.angle_exprs)
        _apply_op(sv, op, angles[pos:pos + n_angles])
        pos += n_angles
    return sv


def _apply_op(sv: Statevector, op: GateOp, angles) -> None:
    kind = op.kind
    if kind == "fsim":
        apply_fsim(sv, op.qubits[0], op.qubits[1], angles[0], angles[1])
    elif kind == "rz":
        apply_rz(sv, op.qubits[0], angles[0])
    elif kind == "rx":
        apply_rx(sv, op.qubits[0], angles[0])
    elif kind == "ry":
        apply_ry(sv, op.qubits[0], angles[0])
    elif len(op.qubits) == 1:
        apply_1q(sv, op.qubits[0], gate_matrix(kind, list(angles)))
    else:
        apply_2q(sv, op.qubits[0], op.qubits[1], gate_matrix(kind, list(angles)))


def u2_matrix(theta: float, phi: float) -> np.ndarray:
    """Dense 4x4 bond gate: [I x Ry(phi/2)] fSim(theta, phi) [I x Ry(-phi/2)]."""
    eye = np.eye(2)
    wrap_pre = np.kron(eye, gate_matrix("ry", [-phi / 2]))
    wrap_post = np.kron(eye, gate_matrix("ry", [phi / 2]))
    return wrap_post @ gate_matrix("fsim", [theta, phi]) @ wrap_pre


# builders ------------------------------------------------------------------


class _ParamAllocator:
    def __init__(self) -> None:
        self.sites: list[ParamSite] = []

    def new(self, layer: int, tag: str, site: int) -> int:
        self.sites.append((layer, tag, site))
        return len(self.sites) - 1


def _xyz_layer(ops: list[GateOp], alloc: _ParamAllocator, layer: int,
               n: int, per_qubit_rz: bool) -> None:
    alphas = [alloc.new(layer, "alpha", q) for q in range(n)]
    betas = [alloc.new(layer, "beta", q) for q in range(n)]
    thetas = [alloc.new(layer, "theta", k) for k in range(n - 1)]
    phis = [alloc.new(layer, "phi", k) for k in range(n - 1)]
    if per_qubit_rz:
        gammas = [alloc.new(layer, "gamma", q) for q in range(n)]
    else:
        gammas = [alloc.new(layer, "gamma", n - 1)]

    def u2_block(k: int, dagger: bool) -> None:
        sign = -1.0 if dagger else 1.0
        ops.append(GateOp("ry", (k + 1,), (ParamExpr(phis[k], -0.5),)))
        ops.append(GateOp("fsim", (k, k + 1),
                          (ParamExpr(thetas[k], sign), ParamExpr(phis[k], sign))))
        ops.append(GateOp("ry", (k + 1,), (ParamExpr(phis[k], 0.5),)))

    for q in range(n):
        ops.append(GateOp("rx", (q,), (ParamExpr(alphas[q]),)))
        ops.append(GateOp("ry", (q,), (ParamExpr(betas[q]),)))
    for k in range(n - 1):
        u2_block(k, dagger=False)
    if per_qubit_rz:
        for q in range(n):
            ops.append(GateOp("rz", (q,), (ParamExpr(gammas[q]),)))
    else:
        ops.append(GateOp("rz", (n - 1,), (ParamExpr(gammas[0]),)))
    for k in range(n - 2, -1, -1):
        u2_block(k, dagger=True)
    for q in range(n):
        ops.append(GateOp("ry", (q,), (ParamExpr(betas[q], -1.0),)))
        ops.append(GateOp("rx", (q,), (ParamExpr(alphas[q], -1.0),)))


def _aswap_layer(ops: list[GateOp], alloc: _ParamAllocator, layer: int, n: int) -> None:
    for start in (0, 1):  # even bonds, then odd bonds (brickwork)
        for k in range(start, n - 1, 2):
            t = alloc.new(layer, "a_theta", k)
            p = alloc.new(layer, "a_phi", k)
            ops.append(GateOp("a", (k, k + 1), (ParamExpr(t), ParamExpr(p))))


def _rotation_column(ops: list[GateOp], alloc: _ParamAllocator, layer: int,
                     n: int, with_rz: bool) -> None:
    tag_ry = "ry0" if layer == 0 else "ry"
    for q in range(n):
        ops.append(GateOp("ry", (q,), (ParamExpr(alloc.new(layer, tag_ry, q)),)))
    if with_rz:
        tag_rz = "rz0" if layer == 0 else "rz"
        for q in range(n):
            ops.append(GateOp("rz", (q,), (ParamExpr(alloc.new(layer, tag_rz, q)),)))


def _ry_layer(ops: list[GateOp], alloc: _ParamAllocator, layer: int, n: int,
              full: bool, with_rz: bool) -> None:
    if full:
        for i in range(n):
            for j in range(i + 1, n):
                ops.append(GateOp("cnot", (i, j)))
    else:
        for k in range(n - 1):
            ops.append(GateOp("cnot", (k, k + 1)))
    _rotation_column(ops, alloc, layer, n, with_rz)


def build_ansatz(kind: AnsatzKind, n_qubits: int, layers: int) -> Circuit:
    """Build a layered ansatz circuit; see the module docstring for layouts."""
    min_qubits = 1 if kind in (AnsatzKind.XYZ1F, AnsatzKind.XYZ2F) else 2
    if n_qubits < min_qubits:
        raise ValueError(f"{kind.value} needs at least {min_qubits} qubits")
    if layers < 1:
        raise ValueError("layers must be >= 1")

    ops: list[GateOp] = []
    alloc = _ParamAllocator()
    boundaries: list[int] = []

    if kind in (AnsatzKind.RY_LINEAR, AnsatzKind.RY_FULL, AnsatzKind.RY_RZ_FULL):
        with_rz = kind is AnsatzKind.RY_RZ_FULL
        _rotation_column(ops, alloc, 0, n_qubits, with_rz)
        for layer in range(1, layers + 1):
            boundaries.append(len(ops))
            _ry_layer(ops, alloc, layer, n_qubits,
                      full=kind is not AnsatzKind.RY_LINEAR, with_rz=with_rz)
    elif kind is AnsatzKind.ASWAP:
        for layer in range(1, layers + 1):
            boundaries.append(len(ops))
            _aswap_layer(ops, alloc, layer, n_qubits)
    else:
        per_qubit_rz = kind is AnsatzKind.XYZ2F
        for layer in range(1, layers + 1):
            boundaries.append(len(ops))
            _xyz_layer(ops, alloc, layer, n_qubits, per_qubit_rz)
    boundaries.append(len(ops))

    circuit = Circuit(
        n_qubits=n_qubits,
        n_params=len(alloc.sites),
        ops=ops,
        layer_boundaries=boundaries,
        param_sites=alloc.sites,
    )
    circuit.validate()
    return circuit


# parameter embedding across system sizes -----------------------------------

_QUBIT_TAGS = frozenset({"alpha", "beta", "gamma", "ry0", "rz0", "ry", "rz"})
_BOND_TAGS = frozenset({"theta", "phi", "a_theta", "a_phi"})


def embed_subsystem_params(
    sub: Circuit,
    params: Sequence[float],
    total: Circuit,
    qubit_offset: int,
    out: np.ndarray | None = None,
) -> np.ndarray:
    """Copy a subsystem's parameters into a composite circuit's vector.

    Sites are matched positionally (qubit q -> q + offset, bond k -> k +
    offset); composite sites with no subsystem counterpart keep their
    existing value (0 for a fresh vector), and subsystem sites with no
    composite counterpart are dropped.
    """
    params = np.asarray(params, dtype=float)
    if params.shape != (sub.n_params,):
        raise ValueError(f"expected {sub.n_params} subsystem parameters")
    values = {}
    for value, (layer, tag, site) in zip(params, sub.param_sites):
        values[(layer, tag, site + qubit_offset)] = value
    if out is None:
        out = np.zeros(total.n_params)
    for i, site in enumerate(total.param_sites):
        if site in values:
            out[i] = values[site]
    return out


def compose_subsystem_params(
    params_a: Sequence[float],
    params_b: Sequence[float],
    n_a: int,
    n_b: int,
    layers: int,
) -> np.ndarray:
    """Exact xyz2f tensor-product embedding: boundary bond stays (0, 0)."""
    sub_a = build_ansatz(AnsatzKind.XYZ2F, n_a, layers)
    sub_b = build_ansatz(AnsatzKind.XYZ2F, n_b, layers)
    params_a = np.asarray(params_a, dtype=float)
    params_b = np.asarray(params_b, dtype=float)
    if params_a.shape != (sub_a.n_params,) or params_b.shape != (sub_b.n_params,):
        raise ValueError(
            "parameter vectors do not match xyz2f circuits with the given "
            f"sizes and {layers} layers"
        )
    total = build_ansatz(AnsatzKind.XYZ2F, n_a + n_b, layers)
    out = embed_subsystem_params(sub_a, params_a, total, 0)
    return embed_subsystem_params(sub_b, params_b, total, n_a, out=out)


# Pauli-exponential compiler -------------------------------------------------

_U2_I = (0.0, 0.0)
_U2_CNOT = (0.0, math.pi)
_U2_ISWAP = (-math.pi / 2, 0.0)

_BOND_GATE_ANGLES = {"I": _U2_I, "CNOT": _U2_CNOT, "iSWAP": _U2_ISWAP}


def pauli_bond_gates(p: str, kind: AnsatzKind) -> list[str]:
    """Staircase assignment ("I" / "CNOT" / "iSWAP") for exp(i*theta*P)."""
    if kind not in (AnsatzKind.XYZ1F, AnsatzKind.XYZ2F):
        raise ValueError("the Pauli-exponential compiler targets xyz1f/xyz2f")
    support = [n for n, letter in enumerate(p) if letter != "I"]
    if not support:
        raise ValueError("all-identity Pauli string has no compiled form")
    if set(p) - set("IXYZ"):
        raise ValueError(f"invalid Pauli string {p!r}")
    first, last = support[0], support[-1]
    in_support = set(support)
    bonds = []
    for k in range(len(p) - 1):
        if k < first or (kind is AnsatzKind.XYZ2F and k >= last):
            bonds.append("I")
        elif (k + 1) in in_support:
            bonds.append("CNOT")
        else:
            bonds.append("iSWAP")
    return bonds


def compile_pauli_rotation(p: str, theta: float, kind: AnsatzKind) -> np.ndarray:
    """One layer's parameters making the xyz1f/xyz2f layer equal exp(i*theta*P).

    Basis changes: the opening Rx/Ry pair realizes Rx(pi/2) for Y letters and
    Ry(-pi/2) for X letters.  The staircase accumulates the support parity
    with CNOT bonds and carries it past gaps with iSWAP bonds; the central Rz
    angle is -2*theta on the carrying qubit.
    """
    bonds = pauli_bond_gates(p, kind)  # also validates p and kind
    n = len(p)
    circuit = build_ansatz(kind, n, 1)
    params = np.zeros(circuit.n_params)
    by_site = {site: i for i, site in enumerate(circuit.param_sites)}

    for q, letter in enumerate(p):
        if letter == "Y":
            params[by_site[(1, "alpha", q)]] = math.pi / 2
        elif letter == "X":
            params[by_site[(1, "beta", q)]] = -math.pi / 2
    for k, gate in enumerate(bonds):
        t, f = _BOND_GATE_ANGLES[gate]
        params[by_site[(1, "theta", k)]] = t
        params[by_site[(1, "phi", k)]] = f
    support = [q for q, letter in enumerate(p) if letter != "I"]
    carrier = support[-1] if kind is AnsatzKind.XYZ2F else n - 1
    params[by_site[(1, "gamma", carrier)]] = -2.0 * theta
    return params


# product-state preparation --------------------------------------------------


def _bloch_vector(state: np.ndarray) -> np.ndarray:
    t0, t1 = state
    return np.array(
        [2 * (np.conj(t0) * t1).real, 2 * (np.conj(t0) * t1).imag,
         abs(t0) ** 2 - abs(t1) ** 2]
    )


def _axis_angle_to_params(axis: np.ndarray, gamma: float) -> tuple[float, float, float]:
    """Invert axis(alpha, beta) = (-sin b, sin a cos b, cos a cos b)."""
    beta = -math.asin(max(-1.0, min(1.0, float(axis[0]))))
    alpha = math.atan2(float(axis[1]), float(axis[2]))
    return alpha, beta, gamma


def prepare_product_state(
    targets: Sequence[np.ndarray], reference: str
) -> np.ndarray:
    """Single xyz2f layer (all bonds identity) preparing a product state.

    Per qubit, the opening Rx(a)Ry(b) pair fixes a rotation axis and the
    central Rz supplies the rotation angle that maps the reference basis
    state's Bloch vector onto the target's.
    """
    if len(targets) != len(reference):
        raise ValueError("need exactly one target state per reference bit")
    n = len(reference)
    circuit = build_ansatz(AnsatzKind.XYZ2F, n, 1)
    params = np.zeros(circuit.n_params)
    by_site = {site: i for i, site in enumerate(circuit.param_sites)}

    for q, (target, bit) in enumerate(zip(targets, reference)):
        target = np.asarray(target, dtype=complex)
        if target.shape != (2,):
            raise ValueError(f"target {q} must be a single-qubit state")
        if abs(np.linalg.norm(target) - 1.0) > 1e-10:
            raise ValueError(f"target {q} is not normalized")
        ref_vec = np.array([0.0, 0.0, 1.0 if bit == "0" else -1.0])
        tgt_vec = _bloch_vector(target)
        cross = np.cross(ref_vec, tgt_vec)
        sin_angle = np.linalg.norm(cross)
        cos_angle = float(ref_vec @ tgt_vec)
        if sin_angle < 1e-14:
            if cos_angle > 0:
                continue  # target equals reference: all zeros
            alpha, beta, gamma = _axis_angle_to_params(np.array([1.0, 0, 0]), math.pi)
        else:
            alpha, beta, gamma = _axis_angle_to_params(
                cross / sin_angle, math.atan2(sin_angle, cos_angle)
            )
        params[by_site[(1, "alpha", q)]] = alpha
        params[by_site[(1, "beta", q)]] = beta
        params[by_site[(1, "gamma", q)]] = gamma
    return params


# resource counting -----------------------------------------------------------


class ResourceCounts(NamedTuple):
    n_params: int
    n_two_qubit: int
    n_single_qubit: int
    asap_depth: int


def asap_depth(circuit: Circuit) -> int:
    """Depth under as-soon-as-possible scheduling, every gate one slot."""
    busy_until = [0] * circuit.n_qubits
    for op in circuit.ops:
        slot = max(busy_until[q] for q in op.qubits) + 1
        for q in op.qubits:
            busy_until[q] = slot
    return max(busy_until, default=0)


def resource_counts(kind: AnsatzKind, n_qubits: int, layers: int) -> ResourceCounts:
    """Parameter/gate counts and ASAP depth read off the built circuit."""
    if n_qubits < 3:
        raise ValueError("resource_counts needs n_qubits >= 3")
    if layers < 1:
        raise ValueError("resource_counts needs layers >= 1")
    circuit = build_ansatz(kind, n_qubits, layers)
    n_two = sum(1 for op in circuit.ops if len(op.qubits) == 2)
    n_one = sum(1 for op in circuit.ops if len(op.qubits) == 1)
    return ResourceCounts(circuit.n_params, n_two, n_one, asap_depth(circuit))
