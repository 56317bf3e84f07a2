"""ybe-optics command line: verify, solve-angles, sweep, emit-circuit, resources.

Exit codes: 0 all checks pass, 1 a verification failed, 2 usage or config error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from dataclasses import fields

import numpy as np

from . import algebra as alg
from . import decomposition as dec
from . import optics as opt
from .errors import YBEError
from .report import ReportDocument, RunConfig
from .suites import SUITES, Angles, run_suite
from .tensor import UP, kron, phase_residual

OBSERVABLES = ("ybe2d_residual", "ybe4d_residual", "concurrence", "gamma_trace")


class UsageError(Exception):
    pass


def _global_flags(p: argparse.ArgumentParser) -> None:
    # SUPPRESS keeps unset flags out of the namespace so config-file values survive
    s = argparse.SUPPRESS
    p.add_argument("--tolerance", type=float, default=s, help="base tolerance (default 1e-10)")
    p.add_argument("--samples", type=int, default=s, help="random draws per suite (default 1000)")
    p.add_argument("--seed", type=int, default=s, help="RNG seed (default 42)")
    p.add_argument("--nu-re", dest="nu_re", type=float, default=s)
    p.add_argument("--nu-im", dest="nu_im", type=float, default=s)
    p.add_argument("--epsilon", type=int, choices=(1, -1), default=s)
    p.add_argument("--convention", choices=("PLUS", "MINUS"), default=s)
    p.add_argument("--config", default=s, help="flat JSON file of RunConfig keys")
    p.add_argument("--out", default=s, help="write output to this path instead of stdout")
    p.add_argument("--csv", action="store_true", default=s, help="CSV output (sweep)")
    p.add_argument("--timing", action="store_true", default=s, help="include wall time in reports")


def _angle_flags(p: argparse.ArgumentParser) -> None:
    for name in ("theta1", "theta2", "theta3", "phi"):
        p.add_argument(f"--{name}", type=float)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ybe-optics", description=__doc__.splitlines()[0])
    _global_flags(parser)
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=[*SUITES, "all"])
    _angle_flags(v)

    s = sub.add_parser("solve-angles", help="middle angle theta2 from theta1, theta3")
    s.add_argument("--theta1", type=float, required=True)
    s.add_argument("--theta3", type=float, required=True)

    w = sub.add_parser("sweep", help="tabulate an observable over theta or phi")
    w.add_argument("--param", choices=("theta", "phi"), required=True)
    w.add_argument("--start", type=float, required=True)
    w.add_argument("--stop", type=float, required=True)
    w.add_argument("--steps", type=int, default=11)
    w.add_argument("--observable", choices=OBSERVABLES, required=True)
    w.add_argument("--theta", type=float, default=0.3, help="fixed theta (theta1) for phi sweeps")
    w.add_argument("--theta3", type=float, default=-0.5, help="fixed theta3 for YBE residual sweeps")
    w.add_argument("--phi", type=float, default=0.0, help="fixed phi for theta sweeps")

    e = sub.add_parser("emit-circuit", help="write an optical circuit as JSON")
    e.add_argument("--dims", choices=("2D", "4D"), default="2D")
    e.add_argument("--side", choices=("LHS", "RHS"), default="LHS")
    e.add_argument("--encoding", help="comma-separated channel encodings")
    e.add_argument("--check", action="store_true", help="append residual against the closed form")
    _angle_flags(e)

    r = sub.add_parser("resources", help="success probability of n measurement-induced CNOTs")
    r.add_argument("n_cnots", type=int)

    for p in (v, s, w, e, r):
        _global_flags(p)
    return parser


def load_config(ns: argparse.Namespace) -> RunConfig:
    """CLI flags > config file > defaults."""
    doc: dict = {}
    path = getattr(ns, "config", None)
    if path:
        try:
            with open(path, encoding="utf-8") as fh:
                doc = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {path}: {exc}") from None
        if not isinstance(doc, dict):
            raise UsageError("config file must hold a JSON object")
    for f in fields(RunConfig):
        if hasattr(ns, f.name):
            doc[f.name] = getattr(ns, f.name)
    try:
        return RunConfig.from_mapping(doc)
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from None


def _emit(ns: argparse.Namespace, text: str) -> None:
    out = getattr(ns, "out", None)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def cmd_verify(ns, cfg: RunConfig) -> int:
    fixed = Angles(ns.theta1, ns.theta2, ns.theta3, ns.phi)
    start = time.perf_counter()
    records = run_suite(ns.suite, cfg, fixed)
    report = ReportDocument(ns.suite, cfg, records)
    if getattr(ns, "timing", False):
        report.wall_time = time.perf_counter() - start
    _emit(ns, report.to_json())
    return 0 if report.passed else 1


def cmd_solve_angles(ns, cfg: RunConfig) -> int:
    try:
        t2 = alg.solve_theta2(ns.theta1, ns.theta3)
    except YBEError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    res = alg.theta2_constraint_residual(ns.theta1, t2, ns.theta3)
    _emit(ns, _dump({"theta1": ns.theta1, "theta2": t2, "theta3": ns.theta3, "residual": res}))
    return 0


def _observable(name: str, theta: float, phi: float, theta3: float, cfg: RunConfig) -> float:
    if name == "concurrence":
        return alg.concurrence_after_r(theta, phi, kron(UP, UP))
    if name == "gamma_trace":
        return dec.gamma_invariant(alg.r_matrix_4d(theta, phi)).trace.real
    angles = alg.AngleParameters(theta, alg.solve_theta2(theta, theta3), theta3, phi)
    verify = alg.verify_ybe_2d if name == "ybe2d_residual" else alg.verify_ybe_4d
    return verify(angles, cfg.tolerance).frobenius_residual


def cmd_sweep(ns, cfg: RunConfig) -> int:
    if ns.steps < 2:
        raise UsageError("--steps must be at least 2")
    if not (math.isfinite(ns.start) and math.isfinite(ns.stop)) or ns.start == ns.stop:
        raise UsageError("bad range: need finite --start != --stop")
    rows = []
    for x in np.linspace(ns.start, ns.stop, ns.steps):
        theta, phi = (float(x), ns.phi) if ns.param == "theta" else (ns.theta, float(x))
        try:
            y = _observable(ns.observable, theta, phi, ns.theta3, cfg)
        except YBEError:
            y = float("nan")
        rows.append((float(x), y))
    if getattr(ns, "csv", False):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([ns.param, ns.observable])
        w.writerows([repr(x), repr(y)] for x, y in rows)
        _emit(ns, buf.getvalue())
    else:
        _emit(ns, _dump({"param": ns.param, "observable": ns.observable, "rows": [list(r) for r in rows]}))
    return 0


def cmd_emit_circuit(ns, cfg: RunConfig) -> int:
    t1 = ns.theta1 if ns.theta1 is not None else 0.3
    t3 = ns.theta3 if ns.theta3 is not None else -0.5
    t2 = ns.theta2 if ns.theta2 is not None else alg.solve_theta2(t1, t3)
    angles = alg.AngleParameters(t1, t2, t3, ns.phi or 0.0, cfg.epsilon)
    encodings = ns.encoding.split(",") if ns.encoding else None
    try:
        circuit = opt.build_ybe_circuit(ns.side, ns.dims, angles, encodings)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    doc = circuit.to_dict()
    passed = True
    if ns.check:
        tol = cfg.loose if ns.dims == "4D" else cfg.tolerance
        res = phase_residual(opt.circuit_unitary(circuit), opt.ybe_target(ns.side, ns.dims, angles))[0]
        passed = res <= tol
        doc["check"] = {"residual": res, "tolerance": tol, "pass": passed}
    try:
        _emit(ns, _dump(doc))
    except OSError as exc:
        print(f"error: cannot write circuit: {exc}", file=sys.stderr)
        return 1
    return 0 if passed else 1


def cmd_resources(ns, cfg: RunConfig) -> int:
    if ns.n_cnots < 0:
        raise UsageError("n_cnots must be non-negative")
    p = dec.success_probability(ns.n_cnots)
    _emit(ns, _dump({"n_cnots": ns.n_cnots, "probability": p}))
    return 0


COMMANDS = {
    "verify": cmd_verify,
    "solve-angles": cmd_solve_angles,
    "sweep": cmd_sweep,
    "emit-circuit": cmd_emit_circuit,
    "resources": cmd_resources,
}


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = load_config(ns)
        return COMMANDS[ns.command](ns, cfg)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
