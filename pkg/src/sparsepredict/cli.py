"""Command-line front end: ``sparsepredict {wizard,predict,restore,shor,grover,sweep}``.

Settings come from (in increasing priority) per-command defaults, a flat
``--config`` file, ``--set KEY=VALUE`` pairs and the dedicated flags.
Results go to ``--out`` (or stdout) as CSV or JSON. Exit codes: 0 success,
1 bound violation or failed run, 2 bad configuration, 3 capacity guard.
"""

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import config as cfgmod
from .errors import ConfigError, SparsePredictError
from .experiments import (
    check_capacity,
    c_for,
    grover_instance,
    grover_theory_gap,
    random_states,
    run_sweep,
    run_times,
    shor_instance,
    sparse_instance,
    strip_instance,
)
from .shor import denominator_candidate, run_shor
from .spectral import SpectrumSpec, build, min_wraparound_gap
from .wizard import classify_type

HEADER = (
    "experiment", "n", "p", "q", "delta", "t", "distance", "fidelity",
    "anc_zero_prob", "u_cond", "naive_cost", "speedup",
)
WIZARD_HEADER = ("experiment", "n", "p", "K", "epsilon", "in_window_mass", "tail_mass", "bound", "pass")
SHOR_HEADER = ("experiment", "modulus", "a", "p", "trial", "measured", "denominator")

COMMAND_DEFAULTS = {
    "wizard": {"n": "8", "p": "5", "count": "8", "gap": "0", "trials": "100"},
    "predict": {"n": "10", "p": "5", "times": "0,1,9,18,36", "trials": "100"},
    "restore": {"n": "10", "p": "5", "times": "0,1,9,18,36", "trials": "100"},
    "shor": {"kind": "shor", "n": "", "p": "6", "trials": "10"},
    "grover": {"kind": "grover", "n": "4", "p": "", "times": "0,1,10,100,max", "trials": "20"},
    "sweep": {"n": "9,10", "p": "4,5", "delta": "0.5,0.25", "times": "max", "trials": "10", "eigenvectors": "0"},
}
COMMON = ("seed", "out", "format", "tolerance", "max_qubits")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(2, f"error: usage_error: {message}\n")


def build_parser():
    parser = _Parser(prog="sparsepredict", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMAND_DEFAULTS:
        cmd = sub.add_parser(name)
        cmd.add_argument("--config", metavar="PATH")
        cmd.add_argument("--set", action="append", default=[], metavar="KEY=VALUE")
        cmd.add_argument("--seed")
        cmd.add_argument("--out", metavar="PATH")
        cmd.add_argument("--format", choices=cfgmod.FORMATS)
        cmd.add_argument("--tolerance")
        cmd.add_argument("--max-qubits", dest="max_qubits")
        for key in cfgmod.PARSERS:
            if key not in COMMON:
                cmd.add_argument(f"--{key.replace('_', '-')}", dest=key, help=argparse.SUPPRESS)
    return parser


def resolve_config(args):
    cfg = cfgmod.parse_pairs(COMMAND_DEFAULTS[args.command].items())
    if args.config:
        cfg = cfgmod.load(args.config, cfg)
    pairs = []
    for item in args.set:
        if "=" not in item:
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        pairs.append(tuple(item.split("=", 1)))
    pairs += [(k, v) for k, v in vars(args).items() if k in cfgmod.PARSERS and v is not None]
    return cfgmod.parse_pairs(pairs, cfg).check()


def _row(experiment, n, p, q, delta, rep):
    return {
        "experiment": experiment, "n": n, "p": p, "q": q, "delta": delta, "t": rep.t,
        "distance": rep.vector_distance, "fidelity": rep.fidelity,
        "anc_zero_prob": rep.ancilla_zero_probability, "u_cond": rep.u_cond_count,
        "naive_cost": rep.naive_cost, "speedup": rep.speedup_ratio,
        "report": rep.to_dict(),
    }


def _error_row(experiment, n, p, q, delta, t, exc):
    row = dict.fromkeys(HEADER, "")
    row.update(experiment=f"{experiment}:{exc.code.replace('_', '-')}", n=n, p=p, q=q, delta=delta, t=t)
    return row


def render(rows, header, summary, fmt, experiment):
    if fmt == "json":
        doc = {"experiment": experiment, "rows": rows, "summary": summary}
        return json.dumps(doc, indent=2, default=_json_default) + "\n"
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=header, extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    for key, value in _flatten(summary):
        buf.write(f"# {key}={value}\n")
    return buf.getvalue()


def _json_default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _flatten(summary, prefix=""):
    if isinstance(summary, dict):
        for k, v in summary.items():
            yield from _flatten(v, f"{prefix}{k}" if not prefix else f"{prefix}.{k}")
    elif isinstance(summary, list) and summary and isinstance(summary[0], dict):
        for i, v in enumerate(summary):
            yield from _flatten(v, f"{prefix}[{i}]")
    else:
        yield prefix, summary


def emit(text, out):
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _spectrum(cfg, n):
    kind = cfg.kind
    if kind == "dyadic-sparse":
        gap = 0.0 if cfg.gap is None else cfg.gap
        return SpectrumSpec(kind, n, count=cfg.count or 8, gap=gap)
    if kind == "strip":
        return SpectrumSpec(kind, n, strips=cfg.strips or 1, width=cfg.single("width"), gap=cfg.gap or 0.125)
    if kind == "shor":
        return SpectrumSpec(kind, n, a=cfg.a, modulus=cfg.modulus)
    return SpectrumSpec(kind, n, marked=cfg.marked)


def cmd_wizard(cfg):
    n, p = cfg.single("n"), cfg.single("p")
    if p > n:
        raise ConfigError(f"ancilla width p={p} exceeds n={n}")
    check_capacity(n, p, cfg.max_qubits)
    u = build(_spectrum(cfg, n), cfg.seed)
    rows, ok = [], True
    for K in cfg.K:
        rep = classify_type(u, p, K, cfg.trials, cfg.seed, include_eigenvectors=bool(cfg.eigenvectors))
        passed = rep.tail_mass <= 1.0 / K + cfg.tolerance
        ok &= passed
        rows.append({
            "experiment": "wizard", "n": n, "p": p, "K": K, "epsilon": rep.epsilon,
            "in_window_mass": rep.in_window_mass, "tail_mass": rep.tail_mass,
            "bound": 1.0 / K, "pass": "pass" if passed else "fail",
        })
    summary = {"kind": cfg.kind, "trials": cfg.trials, "seed": cfg.seed, "result": "pass" if ok else "fail"}
    return rows, WIZARD_HEADER, summary, 0 if ok else 1


def _instance(cfg, n, p, delta):
    kind = cfg.kind
    if kind == "dyadic-sparse":
        check_capacity(n, p + c_for(delta), cfg.max_qubits)
        return sparse_instance(n, p, delta, count=cfg.count, gap=cfg.gap, seed=cfg.seed)
    if kind == "grover":
        inst, _ = grover_instance(n, cfg.marked, delta, p, cfg.precision)
    elif kind == "strip":
        q = cfg.q if cfg.q is not None else (p + c_for(delta) if p is not None else None)
        inst = strip_instance(n, cfg.single("width"), gap=cfg.gap or 0.125, strips=cfg.strips,
                              delta=delta, q=q, precision=cfg.precision or 24, seed=cfg.seed)
    else:
        inst = shor_instance(n, cfg.a, cfg.modulus, delta, p, cfg.precision)
    check_capacity(n, inst.params.q, cfg.max_qubits)
    return inst


def _run_prediction(cfg, experiment, restore=False, extra_states=None):
    n, delta = cfg.single("n"), cfg.single("delta")
    p = cfg.single("p") if cfg.p else None
    inst = _instance(cfg, n, p, delta)
    params = inst.params
    states = random_states(inst.u.N, cfg.trials, cfg.seed)
    if extra_states is not None:
        states = np.vstack([extra_states(inst.u.N), states])
    times = [params.t_max if t == "max" else t for t in cfg.times]
    results = run_times(inst, states, times, restore=restore, eigenvectors=bool(cfg.eigenvectors))
    rows, status = [], 0
    for t, rep in results:
        if isinstance(rep, SparsePredictError):
            rows.append(_error_row(experiment, n, params.p, params.q, delta, t, rep))
            status = max(status, rep.exit_code)
            continue
        rows.append(_row(experiment, n, params.p, params.q, delta, rep))
        if inst.covered and not rep.vector_distance < delta + cfg.tolerance:
            status = max(status, 1)
    summary = {
        "kind": inst.label, "c": params.c, "L": params.L, "t_max": params.t_max,
        "precision": params.n, "bound_covered": inst.covered, "trials": cfg.trials, "seed": cfg.seed,
    }
    return inst, rows, summary, status


def cmd_predict(cfg):
    _, rows, summary, status = _run_prediction(cfg, "predict")
    return rows, HEADER, summary, status


def cmd_restore(cfg):
    _, rows, summary, status = _run_prediction(cfg, "restore", restore=True)
    return rows, HEADER, summary, status


def cmd_grover(cfg):
    uniform = lambda N: np.full((1, N), 1.0 / math.sqrt(N), dtype=np.complex128)  # noqa: E731
    inst, rows, summary, status = _run_prediction(cfg, "grover", extra_states=uniform)
    n = inst.u.n
    gap = min_wraparound_gap(inst.u)
    summary.update({
        "gap": gap,
        "gap_formula": grover_theory_gap(n),
        "sqrt_N": math.sqrt(inst.u.N),
        "u_cond": 2 * (inst.params.L - 1),
        "horizon_over_cost": inst.params.t_max / (2 * (inst.params.L - 1)),
    })
    return rows, HEADER, summary, status


def cmd_sweep(cfg):
    rows_raw, summaries = run_sweep(
        cfg.n, cfg.p, cfg.delta, cfg.times, count=cfg.count, trials=cfg.trials,
        seed=cfg.seed, max_qubits=cfg.max_qubits, eigenvectors=bool(cfg.eigenvectors),
    )
    rows, status = [], 0
    for (n, p, delta), params, t, rep in rows_raw:
        if isinstance(rep, SparsePredictError):
            rows.append(_error_row("sweep", n, p, params.q, delta, t, rep))
            status = max(status, rep.exit_code)
            continue
        rows.append(_row("sweep", n, p, params.q, delta, rep))
        if not rep.vector_distance < delta + cfg.tolerance:
            status = max(status, 1)
    summary = []
    for (n, p, delta), s in summaries.items():
        summary.append({
            "n": n, "p": p, "delta": delta, "runs": s.runs, "horizon": s.measured_horizon,
            "u_cond": s.u_cond_count, "cost_2L": s.cost_2L, "measured_speedup": s.measured_speedup,
            "theoretical_speedup": s.theoretical_speedup, "agreement_factor": s.agreement_factor,
        })
    return rows, HEADER, {"summary": summary}, status


def cmd_shor(cfg):
    n = cfg.n[0] if cfg.n else None
    res = run_shor(cfg.modulus, cfg.a, cfg.single("p"), cfg.trials, cfg.seed, n=n)
    M = 1 << res.p
    rows = []
    for i, (l, convs) in enumerate(zip(res.measurements, res.convergents)):
        rows.append({
            "experiment": "shor", "modulus": res.modulus, "a": res.a, "p": res.p,
            "trial": i, "measured": l, "denominator": denominator_candidate(l, M, res.modulus),
        })
    summary = {
        "period": res.period, "success": res.success, "trials_used": res.trials_used,
        "factors": " ".join(map(str, res.factors)), "u_cond": res.u_cond_count, "M": M,
    }
    return rows, SHOR_HEADER, summary, 0 if res.success else 1


COMMANDS = {
    "wizard": cmd_wizard,
    "predict": cmd_predict,
    "restore": cmd_restore,
    "shor": cmd_shor,
    "grover": cmd_grover,
    "sweep": cmd_sweep,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        rows, header, summary, status = COMMANDS[args.command](cfg)
        emit(render(rows, header, summary, cfg.format, args.command), cfg.out)
    except SparsePredictError as exc:
        msg = " ".join(str(exc).split())
        sys.stderr.write(f"error: {exc.code}: {msg}\n")
        return exc.exit_code
    return status


if __name__ == "__main__":
    sys.exit(main())
