"""Command line for the fixture exporter."""

from __future__ import annotations

import argparse
import logging
import sys

from .basis import molecule_from_angstrom
from .export import MoleculeSpec, export
from .molecules import NAMED
from .scf import ScfError


def _load_xyz(path: str):
    symbols, coords = [], []
    with open(path, encoding="utf-8") as fh:
        lines = [line.strip() for line in fh if line.strip()]
    body = lines[2:] if lines and lines[0].isdigit() else lines
    for line in body:
        parts = line.split()
        symbols.append(parts[0])
        coords.append([float(x) for x in parts[1:4]])
    return molecule_from_angstrom(symbols, coords)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chemexport",
        description="Export molecular qubit Hamiltonians (STO-3G, Jordan-Wigner)",
    )
    parser.add_argument("--molecule", help=f"named system: {sorted(NAMED)}")
    parser.add_argument("--xyz", help="XYZ file with coordinates in Angstrom")
    parser.add_argument("--basis", default="sto-3g", choices=["sto-3g"])
    parser.add_argument("--orbitals", default="OAO", choices=["CMO", "OAO", "LMO"])
    parser.add_argument("--frozen", default="",
                        help="comma-separated orbital indices to freeze (CMO only)")
    parser.add_argument("--spin-penalty-beta", type=float, default=0.0)
    parser.add_argument("--no-fci", action="store_true",
                        help="skip the FCI reference energy")
    parser.add_argument("--no-ccsd", action="store_true",
                        help="skip the CCSD reference energy")
    parser.add_argument("--out", required=True)
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        if (args.molecule is None) == (args.xyz is None):
            raise ValueError("choose exactly one of --molecule or --xyz")
        if args.molecule is not None:
            key = args.molecule.lower()
            if key not in NAMED:
                raise ValueError(f"unknown molecule {args.molecule!r}; "
                                 f"choose from {sorted(NAMED)}")
            mol = NAMED[key]()
            name = key
        else:
            mol = _load_xyz(args.xyz)
            name = args.xyz
        frozen = [int(x) for x in args.frozen.split(",") if x != ""]
        spec = MoleculeSpec(
            molecule=mol,
            orbital_type=args.orbitals,
            frozen=frozen,
            name=name,
            spin_penalty_beta=args.spin_penalty_beta,
            compute_fci=not args.no_fci,
            compute_ccsd=not args.no_ccsd,
        )
        result = export(spec, args.out)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ScfError, RuntimeError) as exc:
        print(f"runtime failure: {exc}", file=sys.stderr)
        return 1
    meta = result.metadata
    print(f"wrote {args.out}: {result.n_qubits} qubits, {len(result.terms)} terms")
    print(f"  e_hf  = {meta['e_hf']:.8f}")
    for key in ("e_fci", "e_ccsd"):
        if key in meta:
            print(f"  {key} = {meta[key]:.8f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
