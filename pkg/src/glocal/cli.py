"""Command-line harness: run, bounds, glocal, compare, gen.

Exit status is 0 on success, 1 for configuration or input errors and 2
when a run ends in a search failure or an unbounded direction.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .datasets import Dataset, gen_realizable_ls, gen_separable_logistic, parse_libsvm, to_libsvm
from .errors import GlocalError, InputError
from .linesearch import ArmijoConfig, LOConfig
from .optimizers import (
    AdGD,
    Armijo,
    Fixed,
    LineOpt,
    Polyak,
    StopRule,
    Trace,
    run_cd,
    run_gd,
    run_nag,
    run_nlcg,
    run_sgd,
)
from .problems import (
    HuberProblem,
    LeastSquaresProblem,
    LogisticProblem,
    Objective,
    QuadraticProblem,
    TwoRegimeProblem,
    spectral_norm_sq,
)
from .theory import (
    BOUND_TAGS,
    complexity_bound,
    gdlo_vs_nag,
    logistic_h,
    logistic_h_optimal,
    logistic_local_constant,
    optimal_delta_logistic,
)

TRACE_HEADER = ("iter", "f", "gap", "grad_norm", "step_size", "dist_sq", "feval", "geval")
RUNTIME_FAILURES = ("search-failure", "unbounded-direction")


class ConfigError(InputError):
    """Invalid experiment configuration."""


# ---------------------------------------------------------------- formatting

def fmt_num(x) -> str:
    """Shortest round-trip decimal; empty for missing values."""
    if x is None:
        return ""
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return ""
    return repr(x)


def trace_csv(trace: Trace) -> str:
    lines = [",".join(TRACE_HEADER)]
    for r in trace.records:
        lines.append(",".join(fmt_num(getattr(r, k)) for k in TRACE_HEADER))
    return "\n".join(lines) + "\n"


def _json_safe(x):
    if isinstance(x, float) and not math.isfinite(x):
        return repr(x)
    if isinstance(x, dict):
        return {k: _json_safe(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_json_safe(v) for v in x]
    return x


def _dump_json(obj) -> str:
    return json.dumps(_json_safe(obj), indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------- config parsing

def _section(cfg: Any, where: str, required: Sequence[str] = (), optional: Sequence[str] = ()) -> Dict[str, Any]:
    if not isinstance(cfg, dict):
        raise ConfigError(f"{where}: expected an object")
    unknown = sorted(set(cfg) - set(required) - set(optional))
    if unknown:
        raise ConfigError(f"{where}: unknown field(s) {', '.join(unknown)}")
    missing = [k for k in required if k not in cfg]
    if missing:
        raise ConfigError(f"{where}: missing field(s) {', '.join(missing)}")
    return cfg


def _num(cfg, key, where, default=None, positive=False, integer=False):
    v = cfg.get(key, default)
    if v is None:
        return None
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{where}.{key}: expected a number")
    if integer and int(v) != v:
        raise ConfigError(f"{where}.{key}: expected an integer")
    if positive and not v > 0:
        raise ConfigError(f"{where}.{key}: must be positive")
    return int(v) if integer else float(v)


def _read_dataset(path: str, binary: bool, dim: Optional[int], base: Path) -> Dataset:
    p = Path(path)
    if not p.is_absolute():
        p = base / p
    try:
        text = p.read_bytes()
    except OSError as exc:
        raise ConfigError(f"cannot read dataset {path!r}: {exc.strerror}") from None
    return parse_libsvm(text, dim=dim, binary=binary)


def build_problem(spec: Any, base: Path = Path(".")) -> Objective:
    where = "problem"
    if not isinstance(spec, dict) or "type" not in spec:
        raise ConfigError("problem: expected an object with a 'type'")
    kind = spec["type"]
    if kind == "quadratic":
        _section(spec, where, ["type"], ["A", "diag", "b", "c"])
        if ("A" in spec) == ("diag" in spec):
            raise ConfigError("problem: give exactly one of 'A' or 'diag'")
        A = np.diag(np.asarray(spec["diag"], dtype=float)) if "diag" in spec else np.asarray(spec["A"], dtype=float)
        return QuadraticProblem(A, spec.get("b"), _num(spec, "c", where, 0.0))
    if kind == "two-regime":
        _section(spec, where, ["type"], ["r", "L", "L_star", "dim"])
        r = spec.get("r", 1.0)
        r = [math.inf if v is None else v for v in r] if isinstance(r, list) else (math.inf if r is None else r)
        return TwoRegimeProblem(r, spec.get("L", 10.0), spec.get("L_star", 1.0), _num(spec, "dim", where, integer=True))
    if kind == "huber":
        _section(spec, where, ["type", "targets", "tau"], ["X"])
        return HuberProblem(spec["targets"], _num(spec, "tau", where, positive=True), spec.get("X"))
    if kind in ("logistic", "least-squares"):
        gen_keys = ("n", "d", "margin", "seed") if kind == "logistic" else ("n", "d", "seed")
        _section(spec, where, ["type"], ["dataset", "generate", "lam", "dim"] if kind == "logistic"
                 else ["dataset", "generate", "dim"])
        if ("dataset" in spec) == ("generate" in spec):
            raise ConfigError("problem: give exactly one of 'dataset' or 'generate'")
        w_star = None
        if "generate" in spec:
            g = _section(spec["generate"], "problem.generate", gen_keys)
            n, d, seed = (_num(g, k, "problem.generate", integer=True) for k in ("n", "d", "seed"))
            if kind == "logistic":
                data = gen_separable_logistic(n, d, _num(g, "margin", "problem.generate"), seed)
            else:
                data, w_star = gen_realizable_ls(n, d, seed)
        else:
            data = _read_dataset(spec["dataset"], kind == "logistic", _num(spec, "dim", where, integer=True), base)
        X = data.to_dense()
        if kind == "logistic":
            return LogisticProblem(X, data.labels, _num(spec, "lam", where, 0.0))
        return LeastSquaresProblem(X, data.labels, w_star=w_star)
    raise ConfigError(f"problem.type: unknown problem type {kind!r}")


def _lo_cfg(spec, where) -> LOConfig:
    if spec is None:
        return LOConfig()
    _section(spec, where, (), ["init_step", "growth", "deriv_tol", "interval_tol", "max_evals", "closed_form"])
    return LOConfig(**spec)


def _armijo_cfg(spec, where) -> ArmijoConfig:
    if spec is None:
        return ArmijoConfig()
    _section(spec, where, (), ["alpha", "beta", "mode", "eta_init", "warm_start", "max_trials"])
    return ArmijoConfig(**spec)


GD_RULES = ("fixed", "lo", "armijo", "polyak", "adgd")


def build_runner(spec: Any, obj: Objective, where: str = "algorithm"):
    """Return (callable(w0, stop) -> Trace, seed or None)."""
    if not isinstance(spec, dict) or "driver" not in spec:
        raise ConfigError(f"{where}: expected an object with a 'driver'")
    drv = spec["driver"]
    extra = ("name",)
    if drv == "gd":
        _section(spec, where, ["driver", "rule"], ["L", "f_star", "lo", "armijo", "eta0", *extra])
        rule_name = spec["rule"]
        if rule_name == "fixed":
            rule = Fixed(_num(spec, "L", where, positive=True))
        elif rule_name == "lo":
            rule = LineOpt(_lo_cfg(spec.get("lo"), where + ".lo"))
        elif rule_name == "armijo":
            rule = Armijo(_armijo_cfg(spec.get("armijo"), where + ".armijo"))
        elif rule_name == "polyak":
            rule = Polyak(_num(spec, "f_star", where))
        elif rule_name == "adgd":
            rule = AdGD(_num(spec, "eta0", where, 1e-10, positive=True))
        else:
            raise ConfigError(f"{where}.rule: expected one of {', '.join(GD_RULES)}")
        if isinstance(rule, Fixed) and rule.L is None and obj.L is None:
            raise ConfigError(f"{where}: fixed step needs L")
        if isinstance(rule, Polyak) and rule.f_star is None and obj.f_star is None:
            raise ConfigError(f"{where}: the Polyak step needs f_star")
        return (lambda w0, stop: run_gd(obj, rule, w0, stop, keep_iterates=False)), None
    if drv == "cd":
        _section(spec, where, ["driver", "selection"], ["seed", "lo", *extra])
        sel = spec["selection"]
        if sel not in ("greedy", "uniform"):
            raise ConfigError(f"{where}.selection: expected 'greedy' or 'uniform'")
        seed = _num(spec, "seed", where, integer=True)
        if sel == "uniform" and seed is None:
            raise ConfigError(f"{where}: uniform selection needs a seed")
        lo = _lo_cfg(spec.get("lo"), where + ".lo")
        return (lambda w0, stop: run_cd(obj, sel, w0, stop, lo, seed, keep_iterates=False)), seed
    if drv == "sgd":
        _section(spec, where, ["driver", "eta_max", "seed"], list(extra))
        eta_max = _num(spec, "eta_max", where, positive=True)
        seed = _num(spec, "seed", where, integer=True)
        if not obj.finite_sum:
            raise ConfigError(f"{where}: SGD needs a finite-sum problem")
        return (lambda w0, stop: run_sgd(obj, eta_max, seed, w0, stop, keep_iterates=False)), seed
    if drv == "nag":
        _section(spec, where, ["driver"], ["mu", "eta_max", "fixed_eta", "max_trials", *extra])
        mu = _num(spec, "mu", where, obj.mu, positive=True)
        if mu is None:
            raise ConfigError(f"{where}: NAG needs mu (the problem does not supply one)")
        fixed = spec.get("fixed_eta")
        if fixed == "1/L":
            if obj.L is None:
                raise ConfigError(f"{where}: fixed_eta '1/L' needs a known L")
            fixed = 1.0 / obj.L
        elif fixed is not None:
            fixed = _num(spec, "fixed_eta", where, positive=True)
        eta_max = _num(spec, "eta_max", where, positive=True)
        if fixed is None and eta_max is None:
            raise ConfigError(f"{where}: NAG needs eta_max or fixed_eta")
        trials = _num(spec, "max_trials", where, 100, positive=True, integer=True)
        return (lambda w0, stop: run_nag(obj, mu, eta_max, w0, stop, fixed, trials, keep_iterates=False)), None
    if drv == "nlcg":
        _section(spec, where, ["driver"], ["reset_period", "lo", *extra])
        period = _num(spec, "reset_period", where, positive=True, integer=True)
        lo = _lo_cfg(spec.get("lo"), where + ".lo")
        return (lambda w0, stop: run_nlcg(obj, w0, stop, period, lo, keep_iterates=False)), None
    raise ConfigError(f"{where}.driver: unknown driver {drv!r}")


def build_init(spec: Any, dim: int) -> Tuple[np.ndarray, Optional[int]]:
    if spec is None:
        return np.zeros(dim), None
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ConfigError("init: expected an object with a 'kind'")
    kind = spec["kind"]
    if kind == "zeros":
        _section(spec, "init", ["kind"])
        return np.zeros(dim), None
    if kind == "constant":
        _section(spec, "init", ["kind", "value"])
        return np.full(dim, _num(spec, "value", "init")), None
    if kind == "random":
        _section(spec, "init", ["kind", "seed"], ["scale"])
        seed = _num(spec, "seed", "init", integer=True)
        scale = _num(spec, "scale", "init", 1.0)
        return scale * np.random.default_rng(seed).standard_normal(dim), seed
    if kind == "point":
        _section(spec, "init", ["kind", "w"])
        w = np.asarray(spec["w"], dtype=float).reshape(-1)
        if w.size != dim:
            raise ConfigError(f"init.w: expected {dim} entries, got {w.size}")
        return w, None
    raise ConfigError(f"init.kind: unknown kind {kind!r}")


def build_stop(spec: Any) -> StopRule:
    if spec is None:
        return StopRule()
    _section(spec, "stop", (), ["gap_tol", "dist_sq_tol", "grad_tol", "max_iters"])
    return StopRule(
        _num(spec, "gap_tol", "stop"),
        _num(spec, "dist_sq_tol", "stop"),
        _num(spec, "grad_tol", "stop"),
        _num(spec, "max_iters", "stop", 1000, integer=True),
    )


def _load_config(path: str) -> Dict[str, Any]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc.strerror}") from None
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path!r} is not valid JSON: {exc}") from None
    if not isinstance(cfg, dict):
        raise ConfigError("config: expected a JSON object")
    return cfg


def _resolve(base: Path, p: str) -> Path:
    q = Path(p)
    return q if q.is_absolute() else base / q


def _summary(trace: Trace, cfg, seeds) -> Dict[str, Any]:
    last = trace.records[-1]
    return {
        "stop_reason": trace.stop_reason,
        "message": trace.message,
        "iterations": trace.iterations,
        "final_f": last.f,
        "final_gap": last.gap,
        "final_grad_norm": last.grad_norm,
        "evaluations": {"feval": last.feval, "geval": last.geval},
        "seed": seeds,
        "config": cfg,
    }


# ---------------------------------------------------------------- commands

def cmd_run(args) -> int:
    cfg = _load_config(args.config)
    base = Path(args.config).resolve().parent
    _section(cfg, "config", ["problem", "algorithm"], ["init", "stop", "output"])
    obj = build_problem(cfg["problem"], base)
    runner, algo_seed = build_runner(cfg["algorithm"], obj)
    w0, init_seed = build_init(cfg.get("init"), obj.dim)
    stop = build_stop(cfg.get("stop"))
    out = _section(cfg.get("output", {}), "output", (), ["trace", "summary"])
    trace_path = args.trace or out.get("trace") or "trace.csv"
    summary_path = args.summary or out.get("summary") or "summary.json"
    trace = runner(w0, stop)
    seeds = {"algorithm": algo_seed, "init": init_seed}
    _resolve(base if not args.trace else Path("."), trace_path).write_text(trace_csv(trace))
    _resolve(base if not args.summary else Path("."), summary_path).write_text(_dump_json(_summary(trace, cfg, seeds)))
    print(f"{trace.stop_reason}: {trace.iterations} iterations, final gap {fmt_num(trace.records[-1].gap) or 'n/a'}")
    return 2 if trace.stop_reason in RUNTIME_FAILURES else 0


BOUND_FLAGS = {
    "L": "L", "Lstar": "L_star", "mu": "mu", "mustar": "mu_star", "mu1": "mu1",
    "delta0": "delta0", "dist0sq": "dist0_sq", "phi3": "phi3", "R2": "R2", "R2local": "R2_local",
    "delta": "delta", "eps": "eps", "alpha": "alpha", "beta": "beta", "d": "d", "zeta": "zeta",
    "Lmax": "L_max", "Lmaxstar": "L_max_star",
}
_FLAG_OF = {v: k for k, v in BOUND_FLAGS.items()}


def cmd_bounds(args) -> int:
    if args.tag not in BOUND_TAGS:
        raise InputError(f"unknown bound tag {args.tag!r}; expected one of {', '.join(BOUND_TAGS)}")
    inputs = {name: getattr(args, flag) for flag, name in BOUND_FLAGS.items() if getattr(args, flag) is not None}
    try:
        b = complexity_bound(args.tag, inputs)
    except InputError as exc:
        msg = str(exc)
        for name, flag in sorted(_FLAG_OF.items(), key=lambda kv: -len(kv[0])):
            msg = msg.replace(f"'{name}'", f"'{name}' (--{flag})")
        raise InputError(msg) from None
    print(_dump_json(b.to_dict()), end="")
    return 0


def _glocal_data(args) -> np.ndarray:
    if args.identity is not None:
        if args.identity < 1:
            raise InputError("--identity needs a positive dimension")
        return np.eye(args.identity)
    if args.dataset is not None:
        try:
            text = Path(args.dataset).read_bytes()
        except OSError as exc:
            raise InputError(f"cannot read dataset {args.dataset!r}: {exc.strerror}") from None
        return parse_libsvm(text).to_dense()
    n, d, margin, seed = args.generate
    return gen_separable_logistic(int(n), int(d), float(margin), int(seed)).to_dense()


def cmd_glocal(args) -> int:
    X = _glocal_data(args)
    if X.size == 0:
        raise InputError("empty dataset")
    nsq = spectral_norm_sq(X)
    L = 0.25 * nsq
    ell = args.ell_star
    if ell < 0:
        raise InputError("--ell-star must be non-negative")

    def bound(delta):
        if args.mu is None or args.delta0 is None or args.eps is None:
            return None
        return complexity_bound("glocal-gd-lo", L=L, L_star=logistic_local_constant(nsq, ell, delta), mu=args.mu,
                                delta0=args.delta0, delta=delta, eps=args.eps).T

    if args.optimal:
        if args.delta0 is None or args.eps is None:
            raise InputError("--optimal needs --delta0 and --eps")
        delta, case = optimal_delta_logistic(args.delta0, args.eps, ell)
        row = {
            "delta_opt": delta,
            "case": case,
            "L": L,
            "L_star": logistic_local_constant(nsq, ell, delta),
            "h_at_delta_opt": logistic_h(delta, args.delta0, args.eps, ell),
            "h_closed_form": logistic_h_optimal(args.delta0, args.eps, ell),
            "bound": bound(delta),
        }
        if args.json:
            print(_dump_json(row), end="")
        else:
            for k, v in row.items():
                print(f"{k:>15}  {v if isinstance(v, str) else fmt_num(v)}")
        return 0
    if not args.delta:
        raise InputError("give --delta values or --optimal")
    rows = []
    for delta in args.delta:
        if not delta > 0:
            raise InputError("--delta values must be positive")
        rows.append({"delta": delta, "L": L, "L_star": logistic_local_constant(nsq, ell, delta), "bound": bound(delta)})
    if args.json:
        print(_dump_json(rows), end="")
    else:
        print(f"{'delta':>12} {'L':>12} {'L_star':>12} {'bound':>8}")
        for r in rows:
            print(f"{r['delta']:>12.6g} {r['L']:>12.6g} {r['L_star']:>12.6g} {fmt_num(r['bound']) or '-':>8}")
    return 0


def cmd_compare(args) -> int:
    cfg = _load_config(args.config)
    base = Path(args.config).resolve().parent
    _section(cfg, "config", ["problem", "algorithms"], ["init", "stop", "target_gap", "constants", "output"])
    algos = cfg["algorithms"]
    if not isinstance(algos, list) or len(algos) < 2:
        raise ConfigError("algorithms: list at least two algorithm specs")
    obj = build_problem(cfg["problem"], base)
    names: List[str] = []
    runners = []
    for k, spec in enumerate(algos):
        where = f"algorithms[{k}]"
        if not isinstance(spec, dict):
            raise ConfigError(f"{where}: expected an object")
        name = spec.get("name") or f"{spec.get('driver', 'algo')}{k}"
        if name in names:
            raise ConfigError(f"{where}.name: duplicate name {name!r}")
        names.append(name)
        runners.append(build_runner(spec, obj, where)[0])
    w0, _ = build_init(cfg.get("init"), obj.dim)
    stop = build_stop(cfg.get("stop"))
    target = _num(cfg, "target_gap", "config", stop.gap_tol, positive=True)
    if target is not None and obj.f_star is None:
        raise ConfigError("target_gap needs a problem with known f*")
    out = _section(cfg.get("output", {}), "output", (), ["csv", "verdict"])
    constants = cfg.get("constants")
    if constants is not None:
        _section(constants, "constants", ["L", "L_star", "mu", "delta0", "delta", "eps"])

    traces = [run(w0, stop) for run in runners]

    cols = ["iter"] + [f"{n}.{c}" for n in names for c in ("gap", "grad_norm", "step_size")]
    lines = [",".join(cols)]
    for t in range(max(len(tr) for tr in traces)):
        cells = [str(t)]
        for tr in traces:
            r = tr.records[t] if t < len(tr) else None
            cells += [fmt_num(r and r.gap), fmt_num(r and r.grad_norm), fmt_num(r and r.step_size)]
        lines.append(",".join(cells))
    verdict: Dict[str, Any] = {
        "target_gap": target,
        "iterations_to_target": {n: (tr.first_iter_below(target) if target is not None else None)
                                 for n, tr in zip(names, traces)},
        "stop_reasons": {n: tr.stop_reason for n, tr in zip(names, traces)},
        "analytic": None,
    }
    if constants is not None:
        faster, lhs, rhs = gdlo_vs_nag(**{k: float(constants[k]) for k in
                                          ("L", "L_star", "mu", "delta0", "delta", "eps")})
        verdict["analytic"] = {"gdlo_faster": faster, "lhs": lhs, "rhs": rhs}
    csv_path = args.csv or out.get("csv") or "compare.csv"
    verdict_path = args.verdict or out.get("verdict") or "verdict.json"
    _resolve(base if not args.csv else Path("."), csv_path).write_text("\n".join(lines) + "\n")
    _resolve(base if not args.verdict else Path("."), verdict_path).write_text(_dump_json(verdict))
    for n, tr in zip(names, traces):
        print(f"{n}: {tr.stop_reason}, target reached at {verdict['iterations_to_target'][n]}")
    return 2 if any(tr.stop_reason in RUNTIME_FAILURES for tr in traces) else 0


def cmd_gen(args) -> int:
    if args.kind == "separable":
        if args.margin is None:
            raise InputError("separable generation needs --margin")
        data = gen_separable_logistic(args.n, args.d, args.margin, args.seed)
        planted = data.planted
    else:
        data, planted = gen_realizable_ls(args.n, args.d, args.seed)
    Path(args.out).write_text(to_libsvm(data))
    if args.planted_out:
        Path(args.planted_out).write_text(_dump_json([float(v) for v in planted]))
    print(f"wrote {data.n} rows of dimension {data.dim} to {args.out}")
    return 0


# ---------------------------------------------------------------- entry point

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def make_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="glocal", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    r = sub.add_parser("run", help="run one optimizer from a JSON config")
    r.add_argument("config")
    r.add_argument("--trace", help="trace CSV path (overrides the config)")
    r.add_argument("--summary", help="summary JSON path (overrides the config)")
    r.set_defaults(func=cmd_run)

    b = sub.add_parser("bounds", help="evaluate an iteration-complexity bound")
    b.add_argument("tag", help=", ".join(BOUND_TAGS))
    for flag in BOUND_FLAGS:
        b.add_argument(f"--{flag}", type=float)
    b.set_defaults(func=cmd_bounds)

    g = sub.add_parser("glocal", help="logistic glocal constants, delta sweeps and the optimal delta")
    src = g.add_mutually_exclusive_group(required=True)
    src.add_argument("--dataset", help="LIBSVM file")
    src.add_argument("--identity", type=int, metavar="D", help="use the D x D identity as data")
    src.add_argument("--generate", nargs=4, type=float, metavar=("N", "D", "MARGIN", "SEED"),
                     help="separable synthetic data")
    g.add_argument("--ell-star", type=float, default=0.0)
    g.add_argument("--delta", type=float, nargs="+")
    g.add_argument("--optimal", action="store_true")
    g.add_argument("--delta0", type=float)
    g.add_argument("--eps", type=float)
    g.add_argument("--mu", type=float, help="strong-convexity (or PL) constant for bound columns")
    g.add_argument("--json", action="store_true")
    g.set_defaults(func=cmd_glocal)

    c = sub.add_parser("compare", help="run several algorithms on one problem")
    c.add_argument("config")
    c.add_argument("--csv")
    c.add_argument("--verdict")
    c.set_defaults(func=cmd_compare)

    n = sub.add_parser("gen", help="write a synthetic LIBSVM dataset")
    n.add_argument("kind", choices=("separable", "realizable"))
    n.add_argument("--n", type=int, required=True)
    n.add_argument("--d", type=int, required=True)
    n.add_argument("--margin", type=float)
    n.add_argument("--seed", type=int, required=True)
    n.add_argument("--out", required=True)
    n.add_argument("--planted-out", help="also write the planted vector as JSON")
    n.set_defaults(func=cmd_gen)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ValueError, TypeError) as exc:
        print(f"glocal: error: {exc}", file=sys.stderr)
        return 1
    except GlocalError as exc:
        print(f"glocal: runtime error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"glocal: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
