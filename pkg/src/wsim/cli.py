"""``wsim`` command-line front end.

Exit codes: 0 success, 1 parse error, 2 physics error (bunching, path-coupler
collision, non-normalized state), 3 validation or usage error, 4 a check ran
and failed (oracle-check).
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import analysis, qcdl
from .circuit import Circuit, ExecutionTrace, ValidationError, run, validate
from .fock import DEFAULT_EPSILON, Configuration, PhysicsError, StateVector, norm

EXIT_OK, EXIT_PARSE, EXIT_PHYSICS, EXIT_VALIDATION, EXIT_CHECK_FAILED = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit 2, which means "physics" here
        self.print_usage(sys.stderr)
        self.exit(EXIT_VALIDATION, f"{self.prog}: error: {message}\n")


def prune_epsilon() -> float:
    raw = os.environ.get("WSIM_EPSILON")
    if raw is None or raw.strip() == "":
        return DEFAULT_EPSILON
    try:
        eps = float(raw)
    except ValueError:
        raise UsageError(f"WSIM_EPSILON must be a decimal number, got {raw!r}") from None
    if not eps >= 0:
        raise UsageError(f"WSIM_EPSILON must be non-negative, got {raw!r}")
    return eps


_PAIR = re.compile(r"^\s*(\d+)\s*:\s*([HV])\s*$")


def parse_input_spec(text: str, mode_count: int) -> Configuration:
    """``"HVHV"`` or ``"1:H,2:V,3:H,4:V"``; every mode must hold an H or V photon."""
    text = text.strip()
    if ":" in text:
        assigned = {}
        for part in text.split(","):
            m = _PAIR.match(part)
            if not m:
                raise UsageError(f"bad input item {part!r}; expected MODE:H or MODE:V")
            mode = int(m.group(1))
            if mode in assigned:
                raise UsageError(f"mode {mode} assigned twice")
            assigned[mode] = m.group(2)
        if sorted(assigned) != list(range(1, mode_count + 1)):
            raise UsageError(f"input must assign every mode 1..{mode_count} exactly once")
        text = "".join(assigned[m] for m in range(1, mode_count + 1))
    if not text or set(text) - {"H", "V"}:
        raise UsageError(f"input {text!r} must consist of H and V only")
    if len(text) != mode_count:
        raise UsageError(f"input has {len(text)} photons, circuit declares {mode_count} modes")
    return Configuration.parse(text)


def _num(x: float) -> str:
    return f"{x:.12g}"


def format_state(state: StateVector, indent: str = "") -> str:
    if len(state) == 0:
        return f"{indent}(zero state)\n"
    return "".join(f"{indent}{c}  {_num(a.real)}  {_num(a.imag)}\n" for c, a in state.items())


def format_trace(trace: ExecutionTrace) -> str:
    out = ["input\n", format_state(trace.initial, "  ")]
    for step in trace.steps:
        out.append(f"step {step.gate_index}: {step.desc}\n")
        out.append(format_state(step.state, "  "))
    return "".join(out)


def _validated(path: str) -> Circuit:
    circuit = qcdl.load(path)
    diags = validate(circuit)
    if diags:
        raise ValidationError(diags)
    return circuit


def _warn_norm(state: StateVector) -> None:
    n = norm(state)
    if abs(n - 1) > 1e-9:
        print(f"warning: final state norm is {_num(n)}; not renormalized", file=sys.stderr)


def _fidelity_target(spec: str, mode_count: int) -> StateVector:
    m = re.fullmatch(r"w(\d+)", spec)
    if not m:
        raise UsageError(f"unknown fidelity target {spec!r}; expected wN, e.g. w4")
    n = int(m.group(1))
    if n != mode_count:
        raise UsageError(f"target {spec} has {n} modes, circuit has {mode_count}")
    return analysis.w_state(n)


def cmd_run(args) -> int:
    eps = prune_epsilon()
    circuit = _validated(args.circuit)
    config = parse_input_spec(args.input, circuit.mode_count)
    target = _fidelity_target(args.fidelity, circuit.mode_count) if args.fidelity else None
    final = run(circuit, config, eps).final
    _warn_norm(final)
    fid = None
    if target is not None:
        try:
            fid = analysis.fidelity(final, target)
        except ValueError as exc:
            raise PhysicsError(str(exc)) from None
    if args.json:
        doc = {"input": str(config), "final": final.to_json()}
        if fid is not None:
            doc["fidelity"] = {"target": args.fidelity, "value": fid}
        print(json.dumps(doc, indent=2))
    else:
        sys.stdout.write(format_state(final))
        if fid is not None:
            print(f"fidelity({args.fidelity})  {_num(fid)}")
    return EXIT_OK


def cmd_trace(args) -> int:
    eps = prune_epsilon()
    circuit = _validated(args.circuit)
    config = parse_input_spec(args.input, circuit.mode_count)
    trace = run(circuit, config, eps)
    if args.json:
        print(json.dumps(trace.to_json(), indent=2))
    else:
        sys.stdout.write(format_trace(trace))
    return EXIT_OK


def cmd_validate(args) -> int:
    circuit = _validated(args.circuit)
    print(f"ok: {circuit.mode_count} modes, {len(circuit.gates)} gates, {circuit.cnot_count()} cnots")
    return EXIT_OK


def compare_golden(circuit: Circuit, golden: dict, eps: float, tol: float = 1e-12):
    """Run the golden trace's input and compare every step; returns (max deviation, first bad step)."""
    initial = StateVector.from_json(golden["input"], eps)
    trace = run(circuit, initial, eps)
    expected = golden["steps"]
    if len(expected) != len(trace.steps):
        return float("inf"), None
    worst, first_bad = 0.0, None
    for step, exp in zip(trace.steps, expected):
        want = StateVector.from_json(exp["state"], eps)
        dev = step.state.max_deviation(want)
        if dev >= tol and first_bad is None:
            first_bad = step
        worst = max(worst, dev)
    return worst, first_bad


def cmd_oracle_check(args) -> int:
    eps = prune_epsilon()
    circuit = _validated(args.circuit)
    try:
        report = analysis.oracle_check(circuit)
    except ValueError as exc:
        raise PhysicsError(str(exc)) from None
    ok = report.passed
    print(
        f"oracle: {'PASS' if report.passed else 'FAIL'}  max deviation {report.max_deviation:.3g}"
        f" over {report.columns} basis inputs (tolerance {report.tolerance:g})"
    )
    if args.golden:
        golden = json.loads(Path(args.golden).read_text(encoding="utf-8"))
        dev, bad = compare_golden(circuit, golden, eps)
        passed = dev < 1e-12
        where = f"; first mismatch at step {bad.gate_index} ({bad.desc})" if bad else ""
        print(f"golden: {'PASS' if passed else 'FAIL'}  max deviation {dev:.3g}{where}")
        ok = ok and passed
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_compare(args) -> int:
    reports = analysis.compare_schemes(analysis.CNOT_MODELS[args.cnot_p])
    if args.json:
        print(json.dumps([r.to_json() for r in reports], indent=2))
    else:
        print(f"cnot success probability: {args.cnot_p}")
        sys.stdout.write(analysis.format_scheme_table(reports))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="wsim", description="Polarization-encoded photonic circuit simulator.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    r = sub.add_parser("run", help="print the final state")
    r.add_argument("circuit", help=".wqc circuit file")
    r.add_argument("input", help='input photons, e.g. "HVHV" or "1:H,2:V,3:H,4:V"')
    r.add_argument("--json", action="store_true")
    r.add_argument("--fidelity", metavar="TARGET", help="append fidelity against wN (e.g. w4)")
    r.set_defaults(func=cmd_run)

    t = sub.add_parser("trace", help="print the state after every gate")
    t.add_argument("circuit")
    t.add_argument("input")
    t.add_argument("--json", action="store_true")
    t.set_defaults(func=cmd_trace)

    c = sub.add_parser("compare", help="success probabilities of W-state schemes")
    c.add_argument("--cnot-p", choices=list(analysis.CNOT_MODELS), default="1/9")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_compare)

    o = sub.add_parser("oracle-check", help="compare sparse runs against the dense oracle")
    o.add_argument("circuit")
    o.add_argument("--golden", metavar="TRACE_JSON", help="also compare against a golden trace")
    o.set_defaults(func=cmd_oracle_check)

    v = sub.add_parser("validate", help="parse and statically check a circuit")
    v.add_argument("circuit")
    v.set_defaults(func=cmd_validate)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except qcdl.QcdlError as exc:
        print(exc, file=sys.stderr)
        return EXIT_PARSE
    except PhysicsError as exc:
        print(f"physics error: {exc}", file=sys.stderr)
        return EXIT_PHYSICS
    except ValidationError as exc:
        for d in exc.diagnostics:
            print(f"invalid circuit: {d}", file=sys.stderr)
        return EXIT_VALIDATION
    except (UsageError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
