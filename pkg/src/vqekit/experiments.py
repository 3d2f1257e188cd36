"""Reproduction harnesses: size-consistency, convergence, scaling, and
gradient-variance experiments, with CSV emission.

CSV floats carry 12 significant digits; row values are quantized to that
precision when the rows are built so that parse(emit(rows)) == rows holds
exactly.  Every CSV writer also drops a JSON sidecar recording the seed,
restart spec, tolerances, and package version next to the output file.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, fields
from typing import Literal, Sequence

import numpy as np

from . import __version__ as _VERSION
from .ansatz import (
    AnsatzKind,
    ResourceCounts,
    asap_depth,
    build_ansatz,
    compose_subsystem_params,
    embed_subsystem_params,
)
from .gradient import energy_and_gradient
from .optimize import (
    BfgsConfig,
    LayerwiseResult,
    RestartSpec,
    layerwise_step,
    layerwise_vqe,
)
from .pauli import PauliSum, disjoint_union, exact_ground_state, expectation, heisenberg_1d
from .statevector import basis_state, fidelity

CHEMICAL_ACCURACY = 1.0e-3


def _f12(x: float | None) -> float | None:
    """Quantize to the CSV precision (12 significant digits)."""
    return None if x is None else float(f"{x:.12g}")


def neel_bitstring(n_qubits: int) -> str:
    return "".join("10"[(q % 2)] for q in range(n_qubits))


@dataclass
class ConvergenceRow:
    layer: int
    energy: float
    error_vs_exact: float
    per_site_energy: float | None
    n_params: int
    n_two_qubit: int
    asap_depth: int
    iterations: int
    wall_time_s: float


@dataclass
class VarianceRow:
    kind: str
    n_qubits: int
    layers: int
    parameter_id: str
    mode: str
    sample_count: int
    variance: float


@dataclass
class SizeConsistencyRow:
    kind: str
    L: int
    e_sub: float
    e_composite: float
    infidelity_sub: float
    infidelity_composite: float


_CSV_FIELDS = {
    ConvergenceRow: "layer,energy,error_vs_exact,per_site_energy,n_params,"
    "n_two_qubit,asap_depth,iterations,wall_time_s",
    VarianceRow: "kind,n_qubits,layers,parameter_id,mode,sample_count,variance",
    SizeConsistencyRow: "kind,L,e_sub,e_composite,infidelity_sub,infidelity_composite",
}


def emit_csv(rows: Sequence, row_type: type) -> str:
    header = _CSV_FIELDS[row_type]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header.split(","))
    for row in rows:
        record = []
        for f in fields(row_type):
            value = getattr(row, f.name)
            if value is None:
                record.append("")
            elif isinstance(value, float):
                record.append(f"{value:.12g}")
            else:
                record.append(str(value))
        writer.writerow(record)
    return buf.getvalue()


def parse_csv(text: str, row_type: type):
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    expected = _CSV_FIELDS[row_type].split(",")
    if header != expected:
        raise ValueError(f"unexpected header {header}, wanted {expected}")
    rows = []
    for record in reader:
        kwargs = {}
        for f, raw in zip(fields(row_type), record):
            if raw == "":
                kwargs[f.name] = None
            elif f.type in ("int", int):
                kwargs[f.name] = int(raw)
            elif f.type in ("str", str):
                kwargs[f.name] = raw
            else:
                kwargs[f.name] = float(raw)
        rows.append(row_type(**kwargs))
    return rows


def write_csv_with_metadata(path, rows: Sequence, row_type: type, metadata: dict) -> None:
    """Write the CSV plus the `<path>.meta.json` run-metadata sidecar."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(emit_csv(rows, row_type))
    write_metadata_sidecar(path, metadata)


def write_metadata_sidecar(path, metadata: dict) -> None:
    doc = {"version": _VERSION, **metadata}
    with open(f"{path}.meta.json", "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1, default=_jsonable)
        fh.write("\n")


def _jsonable(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, AnsatzKind):
        return obj.value
    if isinstance(obj, (BfgsConfig, RestartSpec)):
        return obj.__dict__
    raise TypeError(f"cannot serialize {type(obj)}")


# convergence ----------------------------------------------------------------


def circuit_counts(kind: AnsatzKind, n_qubits: int, layers: int):
    """Resource counts without the Table-validity n >= 3 precondition."""
    circuit = build_ansatz(kind, n_qubits, layers)
    n_two = sum(1 for op in circuit.ops if len(op.qubits) == 2)
    n_one = sum(1 for op in circuit.ops if len(op.qubits) == 1)
    return ResourceCounts(circuit.n_params, n_two, n_one, asap_depth(circuit))


def convergence_rows(
    result: LayerwiseResult,
    kind: AnsatzKind,
    n_qubits: int,
    exact_energy: float,
    n_sites: int | None = None,
) -> list[ConvergenceRow]:
    rows = []
    for rec in result.records:
        counts = circuit_counts(kind, n_qubits, rec.layer)
        rows.append(
            ConvergenceRow(
                layer=rec.layer,
                energy=_f12(rec.energy),
                error_vs_exact=_f12(rec.energy - exact_energy),
                per_site_energy=_f12(rec.energy / n_sites) if n_sites else None,
                n_params=counts.n_params,
                n_two_qubit=counts.n_two_qubit,
                asap_depth=counts.asap_depth,
                iterations=rec.iterations,
                wall_time_s=_f12(rec.wall_time_s),
            )
        )
    return rows


def convergence_sweep(
    h: PauliSum,
    kind: AnsatzKind,
    reference: str,
    L_max: int,
    bfgs: BfgsConfig | None = None,
    restarts: RestartSpec | None = None,
    workers: int = 1,
    n_sites: int | None = None,
) -> list[ConvergenceRow]:
    """Layerwise run reported one row per layer against the ED energy."""
    if L_max < 1:
        raise ValueError("L_max must be >= 1")
    exact_energy, _ = exact_ground_state(h)
    result = layerwise_vqe(h, kind, reference, L_max, bfgs, restarts, workers)
    return convergence_rows(result, kind, h.n_qubits, exact_energy, n_sites)


@dataclass
class AccuracyResult:
    reached: bool
    layers: int | None
    counts: tuple | None
    energies: list[float]
    result: LayerwiseResult


def layers_to_accuracy(
    h: PauliSum,
    kind: AnsatzKind,
    reference: str,
    tolerance: float,
    L_cap: int,
    bfgs: BfgsConfig | None = None,
    restarts: RestartSpec | None = None,
    workers: int = 1,
    per_site: int | None = None,
) -> AccuracyResult:
    """Smallest L whose optimized error reaches the tolerance, if any.

    With per_site set, the error is measured per site.  A cap hit is reported
    as reached=False, not as a failure.
    """
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    exact_energy, _ = exact_ground_state(h)
    scale = per_site if per_site else 1
    result = LayerwiseResult()
    for L in range(1, L_cap + 1):
        record = layerwise_step(h, kind, reference, result, bfgs, restarts, workers)
        if (record.energy - exact_energy) / scale <= tolerance:
            return AccuracyResult(True, L, tuple(circuit_counts(kind, h.n_qubits, L)),
                                  result.energies, result)
    return AccuracyResult(False, None, tuple(circuit_counts(kind, h.n_qubits, L_cap)),
                          result.energies, result)


# size consistency -------------------------------------------------------------


def size_consistency_test(
    kind: AnsatzKind,
    n_sub: int,
    L_list: Sequence[int],
    J: float = -1.0,
    bfgs: BfgsConfig | None = None,
    restarts: RestartSpec | None = None,
    workers: int = 1,
) -> list[SizeConsistencyRow]:
    """Optimize one chain, embed its parameters into the doubled system.

    The composite is the disjoint union of two n_sub-site chains.  xyz2f uses
    the exact tensor-product embedding (boundary bond at identity); other
    kinds are embedded positionally with unmatched boundary parameters left
    at zero, which is where their size-consistency failure shows up.
    """
    h_sub = heisenberg_1d(n_sub, J)
    h_comp = disjoint_union(h_sub, h_sub)
    e_sub_exact, psi_sub_exact = exact_ground_state(h_sub)
    e_comp_exact, psi_comp_exact = exact_ground_state(h_comp)
    ref_sub = neel_bitstring(n_sub)
    ref_comp = ref_sub + ref_sub

    L_max = max(L_list)
    result = layerwise_vqe(h_sub, kind, ref_sub, L_max, bfgs, restarts, workers)

    rows = []
    for L in L_list:
        rec = result.records[L - 1]
        sub_circuit = build_ansatz(kind, n_sub, L)
        comp_circuit = build_ansatz(kind, 2 * n_sub, L)
        if kind is AnsatzKind.XYZ2F:
            comp_params = compose_subsystem_params(rec.params, rec.params, n_sub, n_sub, L)
        else:
            comp_params = embed_subsystem_params(sub_circuit, rec.params, comp_circuit, 0)
            comp_params = embed_subsystem_params(
                sub_circuit, rec.params, comp_circuit, n_sub, out=comp_params
            )
        from .ansatz import run

        psi_sub = run(sub_circuit, rec.params, basis_state(n_sub, ref_sub))
        psi_comp = run(comp_circuit, comp_params, basis_state(2 * n_sub, ref_comp))
        rows.append(
            SizeConsistencyRow(
                kind=kind.value,
                L=L,
                e_sub=_f12(rec.energy / n_sub),
                e_composite=_f12(expectation(h_comp, psi_comp) / (2 * n_sub)),
                infidelity_sub=_f12(1.0 - fidelity(psi_sub, psi_sub_exact)),
                infidelity_composite=_f12(1.0 - fidelity(psi_comp, psi_comp_exact)),
            )
        )
    return rows


# scaling ---------------------------------------------------------------------


def power_law_fit(points: Sequence[tuple[float, float]]) -> tuple[float, float]:
    """Least squares of log(value) on log(N); returns (prefactor, exponent)."""
    if len(points) < 3:
        raise ValueError("power_law_fit needs at least 3 points")
    ns = np.array([p[0] for p in points], dtype=float)
    vals = np.array([p[1] for p in points], dtype=float)
    if np.any(ns <= 0) or np.any(vals <= 0):
        raise ValueError("power_law_fit needs positive coordinates")
    slope, intercept = np.polyfit(np.log(ns), np.log(vals), 1)
    return float(np.exp(intercept)), float(slope)


# barren plateaus ---------------------------------------------------------------

VarianceMode = Literal["random", "layerwise"]


def barren_plateau_variance(
    kind: AnsatzKind,
    N_list: Sequence[int],
    L_list: Sequence[int],
    samples: int,
    mode: VarianceMode,
    seed: int = 0,
    J: float = -1.0,
    bfgs: BfgsConfig | None = None,
    restarts: RestartSpec | None = None,
    workers: int = 1,
) -> list[VarianceRow]:
    """Sample variance of the energy gradient for the first parameter of the
    first and of the last repeating unit, Heisenberg chains.

    mode="random" draws every parameter uniformly from [-pi, pi];
    mode="layerwise" pins the first L-1 units at their layerwise-optimized
    values and randomizes only the last unit.
    """
    if samples < 2:
        raise ValueError("samples must be >= 2")
    if mode not in ("random", "layerwise"):
        raise ValueError(f"unknown mode {mode!r}")
    rows = []
    for n in N_list:
        h = heisenberg_1d(n, J)
        ref = basis_state(n, neel_bitstring(n))
        for L in L_list:
            circuit = build_ansatz(kind, n, L)
            first_last = circuit.first_param_of_layer(circuit.n_layers)
            fixed = None
            if mode == "layerwise" and L > 1:
                warm = layerwise_vqe(h, kind, neel_bitstring(n), L - 1,
                                     bfgs, restarts, workers)
                fixed = warm.final.params
            rng = np.random.default_rng([seed, n, L])
            grads_first = np.empty(samples)
            grads_last = np.empty(samples)
            for s in range(samples):
                if fixed is None:
                    x = rng.uniform(-np.pi, np.pi, circuit.n_params)
                else:
                    x = np.concatenate(
                        [fixed, rng.uniform(-np.pi, np.pi, circuit.n_params - fixed.size)]
                    )
                g = energy_and_gradient(h, circuit, x, ref).gradient
                grads_first[s] = g[0]
                grads_last[s] = g[first_last]
            for pid, grads in (
                ("first-of-first-layer", grads_first),
                ("first-of-last-layer", grads_last),
            ):
                rows.append(
                    VarianceRow(
                        kind=kind.value,
                        n_qubits=n,
                        layers=L,
                        parameter_id=pid,
                        mode=mode,
                        sample_count=samples,
                        variance=_f12(float(np.var(grads, ddof=1))),
                    )
                )
    return rows
