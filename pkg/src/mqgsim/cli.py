"""Command-line front end: synth, verify, compare, nmr-verify, trace.

Exit codes: 0 success/pass, 1 verification failure, 2 usage or parse error.
All randomness flows from --seed, so identical invocations produce
byte-identical JSON.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .circuit import CircuitError, CircuitParseError, metrics, mqg_roles, parse, serialize
from .gf2 import closed_form_outputs, wire_names
from .nmr import KIND_TARGET, LatticeConfig, verify_identity
from .sim import (
    DEFAULT_EXHAUSTIVE_LIMIT,
    bits_to_word,
    oracle_trace,
    run_all,
    run_anf,
    trace_blocks,
)
from .synthesis import SynthesisSpec, synth_mqg_network, table1_compare

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


def _emit(payload: dict, args) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if getattr(args, "out", None):
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _payload(args, command: str, report: dict) -> dict:
    config = {k: v for k, v in vars(args).items() if k != "func"}
    return {
        "version": __version__,
        "command": command,
        "config": config,
        "report": report,
    }


def _network_n(num_qubits: int) -> int:
    # invert M = 2^(n+2) + 1
    n = (num_qubits - 1).bit_length() - 3
    if n < 1 or 2 ** (n + 2) + 1 != num_qubits:
        raise CircuitError(f"{num_qubits} qubits does not match any n-network")
    return n


def cmd_synth(args) -> int:
    circuit = synth_mqg_network(SynthesisSpec(args.n))
    text = serialize(circuit)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    m = metrics(circuit)
    print(
        f"qubits={m.qubit_count} mqg_count={m.mqg_count} "
        f"toffoli_count={m.toffoli_count} depth={m.depth}",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.circuit:
        circuit = parse(Path(args.circuit).read_text(encoding="utf-8"))
    else:
        circuit = synth_mqg_network(SynthesisSpec(args.n))
    n = _network_n(circuit.num_qubits)
    if circuit.roles != mqg_roles(n):
        raise CircuitError("circuit role map does not match the n-network layout")

    mode = args.mode
    if mode == "auto":
        mode = "exhaustive" if circuit.num_qubits <= DEFAULT_EXHAUSTIVE_LIMIT else "symbolic"

    if mode == "exhaustive":
        reference = _closed_form_permutation(n)
        report = run_all(circuit, reference)
        rep = {
            "mode": report.mode,
            "states_checked": report.states_checked,
            "pass": report.passed,
            "counterexample": report.counterexample,
        }
    else:
        expected = closed_form_outputs(n)
        actual = run_anf(circuit)
        names = wire_names(n)
        bad = None
        for ref in mqg_roles(n):
            if actual[ref] != expected[ref]:
                bad = {
                    "wire": ref.label,
                    "expected": expected[ref].to_text(names),
                    "actual": actual[ref].to_text(names),
                }
                break
        rep = {
            "mode": "symbolic",
            "states_checked": len(mqg_roles(n)),
            "pass": bad is None,
            "counterexample": bad,
        }
    _emit(_payload(args, "verify", rep), args)
    return EXIT_OK if rep["pass"] else EXIT_FAIL


def _closed_form_permutation(n: int):
    roles = mqg_roles(n)
    idx = {ref: i for i, ref in enumerate(roles)}
    from .circuit import QubitRef

    control_mask = 1 << idx[QubitRef("A", 0)]
    for l in range(1, 2**n + 1):
        control_mask |= (1 << idx[QubitRef("B", l)]) | (1 << idx[QubitRef("C", l)])
    target_mask = 1 << idx[QubitRef("A", 2**n)]

    def reference(s: int) -> int:
        return s ^ target_mask if (s & control_mask) == control_mask else s

    return reference


def cmd_compare(args) -> int:
    rows = []
    for n in range(1, args.n + 1) if args.all_up_to else [args.n]:
        row = table1_compare(n)
        rows.append(
            {
                "n": n,
                "N": row.N,
                "proposed_units": row.proposed_units,
                "proposed_qubits": row.proposed_qubits,
                "baseline_units": row.baseline_units,
                "baseline_qubits": row.baseline_qubits,
            }
        )
    _emit(_payload(args, "compare", {"rows": rows}), args)
    return EXIT_OK


def cmd_nmr_verify(args) -> int:
    kinds = range(1, 7) if args.kind == "all" else [int(args.kind)]
    if args.couplings is not None:
        couplings = tuple(args.couplings)
    else:
        rng = np.random.default_rng(args.seed)
        couplings = tuple(float(x) for x in rng.uniform(0.2, 2.0, size=6))
    cfg = LatticeConfig(rows=args.rows, couplings=couplings, boundary=args.boundary)
    reports = []
    all_pass = True
    for kind in kinds:
        rep = verify_identity(
            kind, cfg, t=args.t, trials=args.trials, tol=args.tol, seed=args.seed
        )
        all_pass &= rep.passed
        d = rep.to_dict()
        d["target_coupling"] = KIND_TARGET[kind]
        reports.append(d)
    _emit(_payload(args, "nmr-verify", {"pass": all_pass, "identities": reports}), args)
    return EXIT_OK if all_pass else EXIT_FAIL


def cmd_trace(args) -> int:
    n = args.n
    circuit = synth_mqg_network(SynthesisSpec(n))
    if len(args.input) != circuit.num_qubits or set(args.input) - {"0", "1"}:
        raise CircuitError(
            f"--input must be {circuit.num_qubits} chars of 0/1 in flat-index order"
        )
    bits = tuple(int(ch) for ch in args.input)
    traces = trace_blocks(circuit, n, bits)
    oracle = oracle_trace(n, bits)
    rows = []
    all_match = True
    for tr in traces:
        oa, oz, od = oracle[(tr.l, tr.k)]
        match = tr.a == oa and tr.z == oz and (od is None or tr.d == od)
        all_match &= match
        rows.append(
            {
                "l": tr.l,
                "k": tr.k,
                "A": tr.a,
                "A_oracle": oa,
                "Z": tr.z,
                "Z_oracle": oz,
                "D": tr.d,
                "D_oracle": od,
                "match": match,
            }
        )
    if args.format == "json":
        _emit(_payload(args, "trace", {"pass": all_match, "blocks": rows}), args)
    else:
        print(f"input {args.input} (word {bits_to_word(bits)})")
        print("  l  k  A sim/orc  Z sim/orc  D sim/orc  match")
        for r in rows:
            d_orc = "-" if r["D_oracle"] is None else str(r["D_oracle"])
            print(
                f"  {r['l']}  {r['k']}    {r['A']} / {r['A_oracle']}      "
                f"{r['Z']} / {r['Z_oracle']}      {r['D']} / {d_orc}     "
                f"{'ok' if r['match'] else 'MISMATCH'}"
            )
    return EXIT_OK if all_match else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mqgsim",
        description="Synthesize and verify layered Toffoli networks and their "
        "NMR refocusing schedules.",
    )
    parser.add_argument("--version", action="version", version=f"mqgsim {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("synth", help="write the n-network in MQGC1 format")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out", type=str, default=None)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("verify", help="check a circuit against the output law")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--circuit", type=str, help="MQGC1 file to verify")
    src.add_argument("--n", type=int, help="synthesize and verify the n-network")
    p.add_argument("--mode", choices=("auto", "exhaustive", "symbolic"), default="auto")
    p.add_argument("--out", type=str, default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("compare", help="unit-count comparison row(s)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--all-up-to", action="store_true", help="emit rows for 1..n")
    p.add_argument("--out", type=str, default=None)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("nmr-verify", help="check the six refocusing identities")
    p.add_argument("--kind", default="all", choices=["all", "1", "2", "3", "4", "5", "6"])
    p.add_argument("--rows", type=int, default=2)
    p.add_argument("--boundary", choices=("periodic", "open"), default="periodic")
    p.add_argument(
        "--couplings",
        type=float,
        nargs=6,
        default=None,
        metavar=("A", "B", "C", "D", "E", "F"),
        help="six coupling strengths; default drawn from --seed",
    )
    p.add_argument("--t", type=float, default=0.7)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=str, default=None)
    p.set_defaults(func=cmd_nmr_verify)

    p = sub.add_parser("trace", help="block-boundary wire values vs the oracle")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--input", type=str, required=True, help="bits, flat-index order")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out", type=str, default=None)
    p.set_defaults(func=cmd_trace)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CircuitParseError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (CircuitError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
