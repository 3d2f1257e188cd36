"""Command-line entry point binding the solver and experiment harnesses.

Exit codes: 0 on success, 2 on configuration errors, 1 on runtime failures.
Every subcommand writes a `<out>.meta.json` run-metadata sidecar (or
`vqekit-<subcommand>.meta.json` when no output path is given).
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys

import numpy as np

from .ansatz import (
    AnsatzKind,
    build_ansatz,
    compile_pauli_rotation,
    pauli_bond_gates,
    run,
)
from .experiments import (
    AccuracyResult,
    ConvergenceRow,
    SizeConsistencyRow,
    VarianceRow,
    barren_plateau_variance,
    circuit_counts,
    convergence_rows,
    layers_to_accuracy,
    neel_bitstring,
    power_law_fit,
    size_consistency_test,
    write_csv_with_metadata,
    write_metadata_sidecar,
)
from .optimize import BfgsConfig, OptimizationError, RestartSpec, layerwise_vqe
from .pauli import (
    HamiltonianFormatError,
    PauliSum,
    disjoint_union,
    exact_ground_state,
    heisenberg_1d,
    load_hamiltonian,
    number_penalty,
)
from .statevector import random_state

WORKERS_ENV = "VQEKIT_WORKERS"


class ConfigError(ValueError):
    pass


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", help="output path (CSV or JSON depending on subcommand)")
    parser.add_argument("--workers", type=int, default=None,
                        help=f"parallel restarts (default: ${WORKERS_ENV} or all cores)")


def _add_optimizer(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--restarts", default=None,
                        help="comma-separated restart step sizes (must include 0)")
    parser.add_argument("--max-iter", type=int, default=3000)
    parser.add_argument("--grad-tol", type=float, default=1e-7)


def _add_hamiltonian(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--heisenberg", type=int, metavar="N",
                        help="built-in open Heisenberg chain with N sites")
    parser.add_argument("-J", "--coupling", type=float, default=-1.0,
                        help="Heisenberg coupling J (default -1)")
    parser.add_argument("--hamiltonian", metavar="FILE",
                        help="Hamiltonian JSON file")
    parser.add_argument("--reference", default=None,
                        help="neel | <bitstring> | from-metadata")
    parser.add_argument("--penalty", default=None, metavar="NUP,NDOWN,BETA",
                        help="add a particle-number penalty")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vqekit",
        description="Statevector VQE engine with layerwise-optimized ansatz families",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ed", help="exact ground state")
    _add_hamiltonian(p)
    _add_common(p)

    p = sub.add_parser("vqe", help="layerwise VQE run, writes convergence CSV")
    _add_hamiltonian(p)
    p.add_argument("--ansatz", required=True)
    p.add_argument("--layers", type=int, required=True)
    _add_optimizer(p)
    _add_common(p)

    p = sub.add_parser("compile-pauli", help="Pauli-exponential compiler demo")
    p.add_argument("--pauli", required=True,
                   help="support notation (Z0Z1X4) or a full IXYZ string")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--ansatz", default="xyz2f")
    _add_common(p)

    p = sub.add_parser("size-consistency", help="doubled-chain embedding test")
    p.add_argument("--ansatz", required=True)
    p.add_argument("--n-sub", type=int, default=6)
    p.add_argument("-J", "--coupling", type=float, default=-1.0)
    p.add_argument("--layers-list", default="2,4")
    _add_optimizer(p)
    _add_common(p)

    p = sub.add_parser("barren-plateau", help="gradient-variance sweep")
    p.add_argument("--ansatz", required=True)
    p.add_argument("--n-list", default="4,6,8,10")
    p.add_argument("--l-list", default="20")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--mode", choices=("random", "layerwise"), default="random")
    _add_optimizer(p)
    _add_common(p)

    p = sub.add_parser("scaling", help="layers/parameters needed to reach a tolerance")
    p.add_argument("--ansatz", required=True)
    p.add_argument("--n-list", default="4,6,8,10,12")
    p.add_argument("--tol", type=float, default=1e-3,
                   help="per-site energy tolerance (default 1 mH)")
    p.add_argument("--l-cap", type=int, default=30)
    _add_optimizer(p)
    _add_common(p)

    p = sub.add_parser("counts", help="resource counts for an ansatz")
    p.add_argument("--ansatz", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--layers", type=int, required=True)
    _add_common(p)

    return parser


def _resolve_workers(args) -> int:
    if args.workers is not None:
        workers = args.workers
    elif os.environ.get(WORKERS_ENV):
        workers = int(os.environ[WORKERS_ENV])
    else:
        workers = os.cpu_count() or 1
    if workers < 1:
        raise ConfigError("workers must be >= 1")
    return workers


def _resolve_restarts(args) -> RestartSpec:
    if getattr(args, "restarts", None):
        try:
            steps = tuple(float(s) for s in args.restarts.split(","))
        except ValueError as exc:
            raise ConfigError(f"bad --restarts list: {exc}") from exc
        return RestartSpec(step_sizes=steps, seed=args.seed)
    return RestartSpec(seed=args.seed)


def _resolve_bfgs(args) -> BfgsConfig:
    return BfgsConfig(max_iterations=args.max_iter, gradient_tolerance=args.grad_tol)


def _resolve_hamiltonian(args) -> tuple[PauliSum, str, dict]:
    """Returns (hamiltonian, reference bitstring, source metadata)."""
    if (args.heisenberg is None) == (args.hamiltonian is None):
        raise ConfigError("choose exactly one of --heisenberg N or --hamiltonian FILE")
    if args.heisenberg is not None:
        h = heisenberg_1d(args.heisenberg, args.coupling)
        meta = {"source": "heisenberg", "n_sites": args.heisenberg, "J": args.coupling}
        reference = args.reference or "neel"
    else:
        hf = load_hamiltonian(args.hamiltonian)
        h = hf.to_pauli_sum()
        meta = {"source": args.hamiltonian, "metadata": hf.metadata}
        reference = args.reference or "from-metadata"
        if reference == "from-metadata":
            bits = hf.metadata.get("reference_bitstring")
            if not bits:
                raise ConfigError(
                    "file metadata has no reference_bitstring; pass --reference"
                )
            reference = bits
    if reference == "neel":
        reference = neel_bitstring(h.n_qubits)
    if len(reference) != h.n_qubits or set(reference) - {"0", "1"}:
        raise ConfigError(f"bad reference bitstring {reference!r} for {h.n_qubits} qubits")
    if args.penalty:
        try:
            n_up_s, n_down_s, beta_s = args.penalty.split(",")
            penalty = number_penalty(h.n_qubits, int(n_up_s), int(n_down_s), float(beta_s))
        except ValueError as exc:
            raise ConfigError(f"bad --penalty (want NUP,NDOWN,BETA): {exc}") from exc
        h = PauliSum(h.n_qubits, h.terms + penalty.terms).merged()
        meta["penalty"] = args.penalty
    return h, reference, meta


def _parse_pauli(text: str, n: int) -> str:
    if re.fullmatch(r"[IXYZ]+", text):
        if len(text) != n:
            raise ConfigError(f"full Pauli string must have length {n}")
        return text
    letters = ["I"] * n
    pos = 0
    for match in re.finditer(r"([XYZ])(\d+)", text):
        if match.start() != pos:
            raise ConfigError(f"cannot parse Pauli {text!r}")
        pos = match.end()
        q = int(match.group(2))
        if q >= n:
            raise ConfigError(f"qubit {q} out of range for n={n}")
        letters[q] = match.group(1)
    if pos != len(text):
        raise ConfigError(f"cannot parse Pauli {text!r}")
    return "".join(letters)


def _sidecar_path(args) -> str:
    return args.out if args.out else f"vqekit-{args.command}"


def _base_metadata(args) -> dict:
    meta = {"command": args.command, "seed": getattr(args, "seed", None)}
    for key in ("max_iter", "grad_tol"):
        if hasattr(args, key):
            meta[key] = getattr(args, key)
    return meta


def _cmd_ed(args) -> int:
    h, _, source = _resolve_hamiltonian(args)
    energy, _ = exact_ground_state(h)
    print(f"ground-state energy: {energy:.12f}")
    if args.heisenberg:
        print(f"per-site energy:     {energy / args.heisenberg:.12f}")
    meta = {**_base_metadata(args), **source, "energy": energy}
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump({"energy": energy, "n_qubits": h.n_qubits}, fh, indent=1)
            fh.write("\n")
    write_metadata_sidecar(_sidecar_path(args), meta)
    return 0


def _cmd_vqe(args) -> int:
    h, reference, source = _resolve_hamiltonian(args)
    kind = AnsatzKind.parse(args.ansatz)
    workers = _resolve_workers(args)
    restarts = _resolve_restarts(args)
    bfgs = _resolve_bfgs(args)
    exact_energy, _ = exact_ground_state(h)
    result = layerwise_vqe(h, kind, reference, args.layers, bfgs, restarts, workers)
    n_sites = args.heisenberg if args.heisenberg else None
    rows = convergence_rows(result, kind, h.n_qubits, exact_energy, n_sites)
    for row in rows:
        per_site = f" per-site {row.per_site_energy:+.6f}" if row.per_site_energy else ""
        print(f"L={row.layer:2d} energy {row.energy:+.8f} "
              f"error {row.error_vs_exact:.2e}{per_site} "
              f"({row.iterations} iterations)")
    meta = {**_base_metadata(args), **source, "ansatz": kind.value,
            "layers": args.layers, "reference": reference,
            "restart_step_sizes": list(restarts.step_sizes),
            "exact_energy": exact_energy, "workers": workers}
    if args.out:
        write_csv_with_metadata(args.out, rows, ConvergenceRow, meta)
    else:
        write_metadata_sidecar(_sidecar_path(args), meta)
    return 0


def _cmd_compile_pauli(args) -> int:
    import scipy.linalg

    kind = AnsatzKind.parse(args.ansatz)
    letters = _parse_pauli(args.pauli, args.n)
    bonds = pauli_bond_gates(letters, kind)
    params = compile_pauli_rotation(letters, args.theta, kind)
    circuit = build_ansatz(kind, args.n, 1)
    reference = random_state(args.n, np.random.default_rng(args.seed))
    compiled = run(circuit, params, reference)
    target = PauliSum(args.n, [(1.0, letters)]).dense_matrix()
    oracle = scipy.linalg.expm(1j * args.theta * target) @ reference.amplitudes
    fid = abs(np.vdot(oracle, compiled.amplitudes)) ** 2
    print(f"pauli:     {letters}")
    print(f"bonds:     {','.join(bonds)}")
    print(f"fidelity:  {fid:.12f}  (1 - {max(0.0, 1.0 - fid):.3e})")
    meta = {**_base_metadata(args), "pauli": letters, "theta": args.theta,
            "ansatz": kind.value, "bonds": bonds, "fidelity": fid}
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump({"pauli": letters, "bonds": bonds, "fidelity": fid,
                       "params": params.tolist()}, fh, indent=1)
            fh.write("\n")
    write_metadata_sidecar(_sidecar_path(args), meta)
    return 0


def _cmd_size_consistency(args) -> int:
    kind = AnsatzKind.parse(args.ansatz)
    L_list = [int(s) for s in args.layers_list.split(",")]
    rows = size_consistency_test(
        kind, args.n_sub, L_list, J=args.coupling,
        bfgs=_resolve_bfgs(args), restarts=_resolve_restarts(args),
        workers=_resolve_workers(args),
    )
    for row in rows:
        print(f"L={row.L}: e_sub {row.e_sub:+.5f} e_composite {row.e_composite:+.5f} "
              f"1-F_sub {row.infidelity_sub:.5f} 1-F_comp {row.infidelity_composite:.5f}")
    meta = {**_base_metadata(args), "ansatz": kind.value, "n_sub": args.n_sub,
            "J": args.coupling, "L_list": L_list,
            "embedding": "tensor-product (xyz2f) / positional with zero boundary (others)"}
    if args.out:
        write_csv_with_metadata(args.out, rows, SizeConsistencyRow, meta)
    else:
        write_metadata_sidecar(_sidecar_path(args), meta)
    return 0


def _cmd_barren_plateau(args) -> int:
    kind = AnsatzKind.parse(args.ansatz)
    n_list = [int(s) for s in args.n_list.split(",")]
    l_list = [int(s) for s in args.l_list.split(",")]
    rows = barren_plateau_variance(
        kind, n_list, l_list, args.samples, args.mode, seed=args.seed,
        bfgs=_resolve_bfgs(args), restarts=_resolve_restarts(args),
        workers=_resolve_workers(args),
    )
    for row in rows:
        print(f"N={row.n_qubits:2d} L={row.layers:2d} {row.parameter_id:22s} "
              f"var {row.variance:.3e}")
    meta = {**_base_metadata(args), "ansatz": kind.value, "mode": args.mode,
            "samples": args.samples, "n_list": n_list, "l_list": l_list}
    if args.out:
        write_csv_with_metadata(args.out, rows, VarianceRow, meta)
    else:
        write_metadata_sidecar(_sidecar_path(args), meta)
    return 0


def _cmd_scaling(args) -> int:
    kind = AnsatzKind.parse(args.ansatz)
    n_list = [int(s) for s in args.n_list.split(",")]
    results: list[tuple[int, AccuracyResult]] = []
    for n in n_list:
        h = heisenberg_1d(n, -1.0)
        res = layers_to_accuracy(
            h, kind, neel_bitstring(n), args.tol, args.l_cap,
            bfgs=_resolve_bfgs(args), restarts=_resolve_restarts(args),
            workers=_resolve_workers(args), per_site=n,
        )
        status = f"L={res.layers}" if res.reached else f"not reached within L={args.l_cap}"
        print(f"N={n}: {status}")
        results.append((n, res))
    reached = [(n, res) for n, res in results if res.reached]
    fit = None
    if len(reached) >= 3:
        fit = power_law_fit([(n, res.counts[0]) for n, res in reached])
        print(f"N_param to tolerance ~ {fit[0]:.3f} * N^{fit[1]:.3f}")
    lines = ["n_qubits,layers,n_params,n_two_qubit,asap_depth"]
    for n, res in results:
        layers = res.layers if res.reached else ""
        lines.append(f"{n},{layers},{res.counts[0]},{res.counts[1]},{res.counts[3]}")
    meta = {**_base_metadata(args), "ansatz": kind.value, "tol": args.tol,
            "l_cap": args.l_cap, "fit_prefactor": fit[0] if fit else None,
            "fit_exponent": fit[1] if fit else None}
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")
    write_metadata_sidecar(_sidecar_path(args), meta)
    return 0


def _cmd_counts(args) -> int:
    kind = AnsatzKind.parse(args.ansatz)
    counts = circuit_counts(kind, args.n, args.layers)
    print(f"parameters:        {counts.n_params}")
    print(f"two-qubit gates:   {counts.n_two_qubit}")
    print(f"single-qubit gates:{counts.n_single_qubit:>5}")
    print(f"asap depth:        {counts.asap_depth}")
    meta = {**_base_metadata(args), "ansatz": kind.value, "n": args.n,
            "layers": args.layers, "counts": list(counts)}
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(dict(zip(("n_params", "n_two_qubit", "n_single_qubit",
                                "asap_depth"), counts)), fh, indent=1)
            fh.write("\n")
    write_metadata_sidecar(_sidecar_path(args), meta)
    return 0


_COMMANDS = {
    "ed": _cmd_ed,
    "vqe": _cmd_vqe,
    "compile-pauli": _cmd_compile_pauli,
    "size-consistency": _cmd_size_consistency,
    "barren-plateau": _cmd_barren_plateau,
    "scaling": _cmd_scaling,
    "counts": _cmd_counts,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return _COMMANDS[args.command](args)
    except (ConfigError, HamiltonianFormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OptimizationError, RuntimeError, OSError) as exc:
        print(f"runtime failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
