"""Command-line entry points.

Exit codes: 0 success, 1 satisfiable system, 2 parse or I/O error,
3 internal failure (a compiled proof did not check), 4 hypothesis
mismatch between a proof file and its system, 5 rejected proof.
"""

from __future__ import annotations

import argparse
import sys
from typing import List, Optional, Sequence

from . import proofio
from .bench import FAMILIES, default_mode, run_bench, write_csv
from .derivations.builder import DerivationError
from .derivations.refute import refute
from .encoder import encode_system
from .gf import Certificate, TooLarge, brute_force_sat, solve
from .kernel import ProofError, check, is_refutation
from .systems import SystemParseError, parse_system

EXIT_OK = 0
EXIT_SAT = 1
EXIT_INPUT = 2
EXIT_INTERNAL = 3
EXIT_HYP_MISMATCH = 4
EXIT_REJECTED = 5


def _err(msg: str) -> None:
    print(msg, file=sys.stderr)


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load_system(path: str):
    return parse_system(_read(path))


def _fmt_vec(v: Sequence[int]) -> str:
    return "(" + ",".join(str(x) for x in v) + ")"


def _print_metrics(m) -> None:
    print(
        f"degree={m.degree} length={m.length} size={m.size} lines={m.line_count} "
        f"tree_like={str(m.tree_like).lower()} max_coeff_bits={m.max_coeff_bits}"
    )


def cmd_refute(in_path: str, out_path: str, mode: str = "auto") -> int:
    try:
        system = _load_system(in_path)
    except (OSError, SystemParseError) as exc:
        _err(f"error: {exc}")
        return EXIT_INPUT
    if mode == "auto":
        mode = default_mode(system.p)
    if mode == "f2" and system.p != 2:
        _err("error: f2 mode needs field 2")
        return EXIT_INPUT
    res = solve(system)
    if not isinstance(res, Certificate):
        print(f"SAT x={_fmt_vec(res.x)}")
        return EXIT_SAT
    try:
        proof = refute(system, res, mode)
        metrics = check(proof)
        if not is_refutation(proof):
            raise DerivationError("compiled proof does not end in -1")
    except (DerivationError, ProofError) as exc:
        _err(f"internal error: {exc}")
        return EXIT_INTERNAL
    try:
        with open(out_path, "w", encoding="utf-8") as fh:
            proofio.dump(proof, fh)
    except OSError as exc:
        _err(f"error: {exc}")
        return EXIT_INPUT
    _print_metrics(metrics)
    return EXIT_OK


def cmd_check(proof_path: str, system_path: str) -> int:
    try:
        proof = proofio.loads(_read(proof_path))
        system = _load_system(system_path)
    except (OSError, SystemParseError, proofio.ProofFormatError) as exc:
        _err(f"error: {exc}")
        return EXIT_INPUT
    if proof.modulus != system.p or (proof.mode == "f2" and system.p != 2):
        _err(f"hypothesis mismatch: proof is for field {proof.modulus} ({proof.mode}), system has field {system.p}")
        return EXIT_HYP_MISMATCH
    expected = encode_system(system, proof.mode).polys
    if list(expected) != list(proof.hypotheses):
        diff = next((k for k, (e, h) in enumerate(zip(expected, proof.hypotheses)) if e != h), min(len(expected), len(proof.hypotheses)))
        _err(f"hypothesis mismatch at index {diff} ({len(proof.hypotheses)} in proof, {len(expected)} from system)")
        return EXIT_HYP_MISMATCH
    try:
        metrics = check(proof)
    except ProofError as exc:
        where = f"line {exc.line}" if exc.line is not None else "proof"
        _err(f"rejected at {where}: {exc}")
        return EXIT_REJECTED
    if not is_refutation(proof):
        last = proof.last
        _err(f"rejected at line {last.id if last else 0}: final line is not -1")
        return EXIT_REJECTED
    print("OK refutation")
    _print_metrics(metrics)
    return EXIT_OK


def cmd_solve(in_path: str) -> int:
    try:
        system = _load_system(in_path)
    except (OSError, SystemParseError) as exc:
        _err(f"error: {exc}")
        return EXIT_INPUT
    res = solve(system)
    if isinstance(res, Certificate):
        J = "{" + ",".join(str(j + 1) for j in res.J) + "}"
        print(f"UNSAT certificate J={J} y={_fmt_vec(res.y)}")
        return EXIT_OK
    print(f"SAT x={_fmt_vec(res.x)}")
    return EXIT_SAT


def cmd_oracle(in_path: str, cap: int = 2**20) -> int:
    try:
        system = _load_system(in_path)
        res = brute_force_sat(system, cap)
    except (OSError, SystemParseError, TooLarge) as exc:
        _err(f"error: {exc}")
        return EXIT_INPUT
    if hasattr(res, "x"):
        print(f"SAT x={_fmt_vec(res.x)}")
        return EXIT_SAT
    print(f"UNSAT after {system.p ** system.n} assignments")
    return EXIT_OK


def cmd_stats(proof_path: str) -> int:
    try:
        proof = proofio.loads(_read(proof_path))
    except (OSError, proofio.ProofFormatError) as exc:
        _err(f"error: {exc}")
        return EXIT_INPUT
    try:
        metrics = check(proof)
    except ProofError as exc:
        _err(f"rejected at line {exc.line}: {exc}")
        return EXIT_REJECTED
    print(f"field={proof.modulus} mode={proof.mode} hypotheses={len(proof.hypotheses)} refutation={str(is_refutation(proof)).lower()}")
    _print_metrics(metrics)
    return EXIT_OK


def _n_range(text: str):
    lo, sep, hi = text.partition(":")
    try:
        a = int(lo)
        b = int(hi) if sep else a
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A:B, got {text!r}") from None
    if a > b:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return a, b


def cmd_bench(family: str, n_range, p: int, w: int, seed: int, csv_path: str) -> int:
    try:
        records = run_bench(family, n_range[0], n_range[1], p, w, seed)
    except ValueError as exc:
        _err(f"error: {exc}")
        return EXIT_INPUT
    except (DerivationError, ProofError) as exc:
        _err(f"internal error: {exc}")
        return EXIT_INTERNAL
    try:
        with open(csv_path, "w", encoding="utf-8", newline="") as fh:
            write_csv(records, fh)
    except OSError as exc:
        _err(f"error: {exc}")
        return EXIT_INPUT
    for r in records:
        print(f"{r.family} n={r.n} size={r.size} degree={r.degree} ms={r.ms}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sagauss", description="Semi-algebraic refutations of unsatisfiable linear systems over prime fields.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("refute", help="compile a refutation of an unsatisfiable system")
    p.add_argument("input")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--mode", choices=["auto", "f2", "fp"], default="auto")

    p = sub.add_parser("check", help="verify a proof file against its system")
    p.add_argument("proof")
    p.add_argument("--system", required=True)

    p = sub.add_parser("solve", help="Gaussian elimination: solution or certificate")
    p.add_argument("input")

    p = sub.add_parser("oracle", help="exhaustive satisfiability check")
    p.add_argument("input")
    p.add_argument("--cap", type=int, default=2**20)

    p = sub.add_parser("stats", help="check a proof file and print its metrics")
    p.add_argument("proof")

    p = sub.add_parser("bench", help="refute a family of instances and write metrics as CSV")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--n", type=_n_range, required=True, metavar="A:B")
    p.add_argument("--field", type=int, default=2)
    p.add_argument("--w", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--csv", required=True)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "refute":
        return cmd_refute(args.input, args.output, args.mode)
    if args.command == "check":
        return cmd_check(args.proof, args.system)
    if args.command == "solve":
        return cmd_solve(args.input)
    if args.command == "oracle":
        return cmd_oracle(args.input, args.cap)
    if args.command == "stats":
        return cmd_stats(args.proof)
    return cmd_bench(args.family, args.n, args.field, args.w, args.seed, args.csv)
