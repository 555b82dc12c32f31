"""Command-line front end: ``necklace {obstruct,verify,flow,pencil}``.

Exit codes: 0 success or feasible, 1 usage or domain error, 2 obstructed,
3 unsupported or degenerate pencil.  JSON output is canonical (sorted keys,
fixed indentation), so re-emitting parsed output gives identical bytes.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from .errors import DegeneratePencil, NecklaceError, UnsupportedPencil

EXIT_OK, EXIT_USAGE, EXIT_OBSTRUCTED, EXIT_UNSUPPORTED = 0, 1, 2, 3
SEED_ENV = "NECKLACE_SEED"

DEFAULT_CAPS = {
    "fiber_residual": 1e-10,
    "isotropy_residual": 1e-4,
    "conservation_drift": 1e-7,
    "distance_to_L": 1e-4,
    "hopf_isotropy": 1e-7,
    "min_distance": 1.0,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV, "0")
    try:
        return int(raw)
    except ValueError as exc:
        raise UsageError(f"{SEED_ENV} must be an integer, got {raw!r}") from exc


@dataclass
class RunConfig:
    seed: int = 0
    dt: float = 1e-3
    fd_step: float = 1e-5
    caps: dict = field(default_factory=lambda: dict(DEFAULT_CAPS))
    output_format: str = "human"

    def __post_init__(self):
        if self.output_format not in ("human", "json", "csv"):
            raise UsageError(f"unknown output format {self.output_format!r}")
        if not (self.dt > 0 and self.fd_step > 0):
            raise UsageError("dt and fd-step must be positive")
        if any(not v > 0 for v in self.caps.values()):
            raise UsageError("caps must be positive")


def dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _flag(x) -> str:
    return "1" if x else "0"


# -- obstruct ----------------------------------------------------------------

def cmd_obstruct(args, config: RunConfig, out) -> int:
    from .obstruct import CSV_COLUMNS, ObstructionQuery, theoremB_cases

    report = theoremB_cases(ObstructionQuery(args.n, args.k, args.c))
    doc = report.to_dict()
    if config.output_format == "json":
        out.write(dump_json(doc))
    elif config.output_format == "csv":
        row = [args.n, args.k, args.c, _flag(report.feasible), _flag("A" in report.cases),
               _flag("B" in report.cases), _flag("C" in report.cases), _flag(report.special_branch)]
        out.write(_csv(CSV_COLUMNS, [row]))
    else:
        verdict = "feasible" if report.feasible else "obstructed"
        out.write(f"n={args.n} k={args.k} C={args.c} (minimal Maslov {doc['maslov']}): {verdict}\n")
        branch = "n = 3k+1, clause (2)" if report.special_branch else "n != 3k+1, clauses (a)/(b)/(c)"
        out.write(f"branch: {branch}\n")
        if report.cases:
            out.write("cases: " + ", ".join(sorted(report.cases)) + "\n")
        for line in report.derived_divisibilities:
            out.write(f"  {line}\n")
        if not report.derived_divisibilities:
            out.write("  no clause holds\n")
        if report.special_branch and report.special_exact != report.special_stated:
            out.write(f"  note: exact (2) gives {report.special_exact}, stated (2) gives "
                      f"{report.special_stated}\n")
        w = report.witness
        if w is not None:
            if w.unmatched:
                out.write("witness: maximal pairing leaves degrees "
                          + " ".join(map(str, w.unmatched)) + " unmatched\n")
            else:
                out.write("witness: perfect pairing\n")
            for s, t, r in w.pairs:
                out.write(f"  d^{r}: {s} -> {t}\n")
    return EXIT_OK if report.feasible else EXIT_OBSTRUCTED


# -- verify ------------------------------------------------------------------

def cmd_verify(args, config: RunConfig, out) -> int:
    from .obstruct import CSV_COLUMNS, verify_theoremB

    if args.max_n < 0 or (args.max_c is not None and args.max_c < 0) or args.jobs < 0:
        raise UsageError("bounds and jobs must be non-negative")
    summary = verify_theoremB(args.max_n, args.max_c, jobs=args.jobs,
                              collect_rows=config.output_format == "csv")
    if config.output_format == "json":
        out.write(dump_json(summary.to_dict()))
    elif config.output_format == "csv":
        rows = [[n, k, c] + [_flag(x) for x in rest] for n, k, c, *rest in summary.rows]
        out.write(_csv(CSV_COLUMNS, rows))
    else:
        bound = "n+2" if args.max_c is None else str(args.max_c)
        out.write(f"grid: 3 <= n <= {args.max_n}, 1 <= k <= n-2, 1 <= C <= {bound}\n")
        out.write(f"checked {summary.checked}: {summary.feasible} feasible, "
                  f"{summary.obstructed} obstructed\n")
        t = summary.tallies
        out.write(f"clause hits: (a) {t['A']}  (b) {t['B']}  (c) {t['C']}  (2) {t['special']}\n")
        out.write(f"necessity failures: {len(summary.necessity_failures)}\n")
        out.write(f"equivalence failures: {len(summary.equivalence_failures)}\n")
        for n, k, c in summary.counterexamples:
            out.write(f"  counterexample n={n} k={k} C={c}\n")
    return EXIT_OK if summary.ok else EXIT_OBSTRUCTED


# -- flow --------------------------------------------------------------------

def _within(metrics: dict, caps: dict) -> dict:
    checks = {}
    for key in ("fiber_residual", "isotropy_residual", "conservation_drift", "distance_to_L"):
        if metrics.get(key) is not None:
            checks[key] = metrics[key] <= caps[key]
    return checks


def flow_verify_local(args, config: RunConfig) -> dict:
    from .flow import FlowModel, Locus, flow_batch, random_state, sample_necklace

    model = FlowModel(k=args.k, m=args.m)
    locus = Locus("point") if args.k == 0 else Locus("real")
    sample = sample_necklace(model, locus, args.epsilon, count=args.count, seed=config.seed,
                             fd_step=config.fd_step, flow_time=args.time, dt=config.dt)
    metrics = dict(sample.metrics)
    # Conservation on generic states, where H = Im pi is not identically zero.
    rng = np.random.default_rng(config.seed)
    states = [random_state(model, rng) for _ in range(args.count)]
    _, drift = flow_batch(model, np.array([s.real(model) for s in states]), args.time,
                          config.dt, track_h=True)
    metrics["conservation_drift"] = max(metrics.get("conservation_drift", 0.0), float(drift.max()))
    metrics.update(k=args.k, m=args.m, dt=config.dt, fd_step=config.fd_step, seed=config.seed)
    return {"command": "verify-local", "metrics": metrics, "checks": _within(metrics, config.caps)}


def flow_hopf(args, config: RunConfig) -> dict:
    from .flow import hopf_model, hopf_necklace, isotropy_residual

    points = hopf_necklace(args.k, count=args.count, seed=config.seed, fd_step=config.fd_step)
    residual = isotropy_residual(hopf_model(args.k), points)
    metrics = {"k": args.k, "count": len(points), "isotropy_residual": residual,
               "fd_step": config.fd_step, "seed": config.seed}
    return {"command": "hopf", "metrics": metrics,
            "checks": {"isotropy_residual": residual <= config.caps["hopf_isotropy"]}}


def _parse_shift(text: str) -> list[complex]:
    try:
        return [complex(part.strip().replace("i", "j")) for part in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"--shift expects comma-separated numbers, got {text!r}") from exc


def flow_displace(args, config: RunConfig) -> dict:
    from .flow import displacement_check

    shift = _parse_shift(args.shift)
    dist = displacement_check(args.k, shift, count=args.count, seed=config.seed)
    metrics = {"k": args.k, "shift": [[z.real, z.imag] for z in shift], "pairs": args.count ** 2,
               "min_distance": dist, "seed": config.seed}
    return {"command": "displace", "metrics": metrics,
            "checks": {"min_distance": dist >= config.caps["min_distance"]}}


def cmd_flow(args, config: RunConfig, out) -> int:
    runner = {"verify-local": flow_verify_local, "hopf": flow_hopf, "displace": flow_displace}
    record = runner[args.flow_command](args, config)
    record["ok"] = all(record["checks"].values())
    if config.output_format == "json":
        out.write(dump_json(record))
    elif config.output_format == "csv":
        rows = [[k, json.dumps(v)] for k, v in sorted(record["metrics"].items())]
        rows += [[f"check:{k}", _flag(v)] for k, v in sorted(record["checks"].items())]
        out.write(_csv(["metric", "value"], rows))
    else:
        out.write(f"flow {record['command']}\n")
        for key, val in sorted(record["metrics"].items()):
            out.write(f"  {key}: {val}\n")
        for key, val in sorted(record["checks"].items()):
            out.write(f"  [{'ok' if val else 'FAIL'}] {key}\n")
    return EXIT_OK if record["ok"] else EXIT_OBSTRUCTED


# -- pencil ------------------------------------------------------------------

def cmd_pencil(args, config: RunConfig, out) -> int:
    from .pencil import QuadricPencil, analyze

    try:
        pencil = QuadricPencil.load(args.path)
    except OSError as exc:
        raise UsageError(f"cannot read {args.path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{args.path} is not valid JSON: {exc}") from exc
    doc = analyze(pencil)
    if config.output_format == "json":
        out.write(dump_json(doc))
    elif config.output_format == "csv":
        rows = [["parameter", " ".join(r["lambda"]), r["multiplicity"],
                 ";".join(" ".join(v) for v in r["kernel"])] for r in doc["singular_parameters"]]
        rows += [["base_singular", " ".join(b["lambda"]), "", " ".join(b["point"])]
                 for b in doc["base_singular_points"]]
        out.write(_csv(["kind", "lambda", "multiplicity", "vectors"], rows))
    else:
        bracket = lambda xs: "[" + ":".join(xs) + "]"
        out.write(f"pencil of quadrics in P^{doc['n']}\n")
        out.write("singular members:\n")
        for r in doc["singular_parameters"]:
            kernel = ", ".join("(" + ", ".join(v) + ")" for v in r["kernel"])
            out.write(f"  {bracket(r['lambda'])}  multiplicity {r['multiplicity']}  kernel {kernel}\n")
        out.write("base locus meets singular locus at:\n")
        for b in doc["base_singular_points"]:
            out.write(f"  {bracket(b['point'])} on member {bracket(b['lambda'])}\n")
        if not doc["base_singular_points"]:
            out.write("  nowhere\n")
        out.write(f"Lefschetz: {'yes' if doc['lefschetz'] else 'no'} ({doc['diagnosis']})\n")
    return EXIT_OK


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", dest="output_format", choices=("human", "json", "csv"),
                        default=argparse.SUPPRESS, help="output format (default human)")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                        help=f"random seed (default ${SEED_ENV} or 0)")

    parser = _Parser(prog="necklace", parents=[common],
                     description="Obstructions, flows and pencils for Morse-Bott degenerations.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("obstruct", parents=[common], help="verdict for one (n, k, C)")
    p.add_argument("--n", type=int, required=True, help="complex dimension of the fiber")
    p.add_argument("--k", type=int, required=True, help="dimension of the critical P^k")
    p.add_argument("--c", type=int, required=True, help="minimal Chern number")
    p.set_defaults(handler=cmd_obstruct)

    p = sub.add_parser("verify", parents=[common], help="exhaustive check on a grid")
    p.add_argument("--max-n", type=int, required=True)
    p.add_argument("--max-c", type=int, default=None, help="Chern bound (default n+2 per n)")
    p.add_argument("--jobs", type=int, default=1, help="worker processes (0 = all cores)")
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("flow", help="numerical checks on the local model")
    flow = p.add_subparsers(dest="flow_command", required=True)
    tol = _Parser(add_help=False)
    tol.add_argument("--dt", type=float, default=None, help="RK4 step (default 1e-3)")
    tol.add_argument("--fd-step", type=float, default=None, help="frame step (default 1e-5)")
    for key in DEFAULT_CAPS:
        tol.add_argument(f"--cap-{key.replace('_', '-').lower()}", dest=f"cap_{key}", type=float,
                         default=None, help=f"cap for {key} (default {DEFAULT_CAPS[key]:g})")

    q = flow.add_parser("verify-local", parents=[common, tol],
                        help="fiber, isotropy and conservation residuals")
    q.add_argument("--k", type=int, required=True)
    q.add_argument("--m", type=int, required=True)
    q.add_argument("--epsilon", type=float, default=0.1)
    q.add_argument("--count", type=int, default=64)
    q.add_argument("--time", type=float, default=5.0, help="flow duration")
    q = flow.add_parser("hopf", parents=[common, tol], help="isotropy of the Hopf sphere")
    q.add_argument("--k", type=int, required=True)
    q.add_argument("--count", type=int, default=1000)
    q = flow.add_parser("displace", parents=[common, tol], help="displacement by a translation")
    q.add_argument("--k", type=int, required=True)
    q.add_argument("--shift", required=True, help="comma-separated translation, e.g. 3,0")
    q.add_argument("--count", type=int, default=100, help="samples per side")
    p.set_defaults(handler=cmd_flow)

    p = sub.add_parser("pencil", parents=[common], help="analyze a pencil document")
    p.add_argument("path")
    p.set_defaults(handler=cmd_pencil)
    return parser


def _config(args) -> RunConfig:
    seed = getattr(args, "seed", None)
    caps = dict(DEFAULT_CAPS)
    for key in DEFAULT_CAPS:
        val = getattr(args, f"cap_{key}", None)
        if val is not None:
            caps[key] = val
    dt = getattr(args, "dt", None)
    fd = getattr(args, "fd_step", None)
    return RunConfig(seed=default_seed() if seed is None else seed,
                     dt=1e-3 if dt is None else dt,
                     fd_step=1e-5 if fd is None else fd,
                     caps=caps,
                     output_format=getattr(args, "output_format", "human"))


def main(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        args = build_parser().parse_args(argv)
        config = _config(args)
        if getattr(args, "count", 1) < 1:
            raise UsageError("--count must be positive")
        return args.handler(args, config, out)
    except UsageError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE
    except (UnsupportedPencil, DegeneratePencil) as exc:
        err.write(f"{type(exc).__name__}: {exc}\n")
        return EXIT_UNSUPPORTED
    except NecklaceError as exc:
        err.write(f"{type(exc).__name__}: {exc}\n")
        return EXIT_USAGE
