"""Experiment runner CLI: expectation | sweep | infidelity.

Sweep and infidelity emit deterministic CSV (fixed seed => identical bytes):
repetitions get independent child RNG streams keyed by (seed, rep), so the
output does not depend on worker scheduling. An optional key=value config
file is merged under the command-line flags; explicit flags win.
"""

from __future__ import annotations

import argparse
import hashlib
import os
import sys
import traceback
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import InfeasibleRescaling, VqaeError
from .estimator import (
    VqaeConfig,
    rms_error,
    run_adaptive,
    run_mc,
    run_mlae,
    run_vqae,
)
from .optimizer import OptimizerConfig
from .problem import KINDS, PAPER_PARAMS, ProblemSpec, exact_amplitude, tabulate
from .simulator import seeded_rng

ESTIMATORS = ("mc", "mlae", "vqae-naive", "vqae-adaptive", "vqae-ideal")
MC_SHOTS = tuple(10**e for e in range(2, 8))

SWEEP_HEADER = (
    "estimator,dist,n,C,m,N_q_total,N_q_sampling,N_q_variational,"
    "N_q_loose,delta_theta_rms,reps,seed"
)
INFIDELITY_HEADER = "dist,d,m,infidelity_mean,infidelity_sem,inits"


@dataclass
class RunConfig:
    """Validated arguments of one CLI invocation."""

    command: str
    dist: str = "gaussian"
    n: int = 5
    mu: float | None = None
    sigma: float | None = None
    c0: float | None = None
    c1: float | None = None
    C: float = 1.0
    estimator: str = "vqae-adaptive"
    M: int = 50
    k: int = 10
    h: int = 2000
    l: int = 1
    nf: int = 100
    ns: int = 100
    depths: tuple = (4,)
    lr: float = 1e-3
    loose_shots: int = 500_000
    charge_variational: bool = True
    exact_gradient: bool = False
    reps: int = 100
    seed: int = 1234
    threads: int = field(default_factory=lambda: os.cpu_count() or 1)
    out: str = ""

    def problem(self) -> ProblemSpec:
        base = PAPER_PARAMS[self.dist]
        return ProblemSpec(
            kind=self.dist,
            n=self.n,
            mu=self.mu if self.mu is not None else base["mu"],
            sigma=self.sigma if self.sigma is not None else base["sigma"],
            c0=self.c0 if self.c0 is not None else base.get("c0", 0.0),
            c1=self.c1 if self.c1 is not None else base.get("c1", 10.0),
            C=self.C,
        )

    def vqae(self, estimator: str) -> VqaeConfig:
        trials = 0 if self.exact_gradient else self.nf
        return VqaeConfig(
            k=self.k,
            M=self.M,
            h=self.h,
            winding=self.l,
            loose_shots=self.loose_shots,
            ansatz_kind="minimal" if estimator == "vqae-adaptive" else "layered",
            depth=self.depths[0],
            optimizer=OptimizerConfig(
                learning_rate=self.lr, sweeps=self.ns, trials=trials
            ),
            charge_variational=self.charge_variational,
            ideal_update=(estimator == "vqae-ideal"),
        )


def _fmt(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.12g}"


def write_csv(path: str, header: str, rows):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


# ---------------------------------------------------------------------------
# repetition workers (top level so they pickle for the process pool)
# ---------------------------------------------------------------------------

def _sweep_rep(task):
    cfg, rep = task
    spec = cfg.problem()
    est = cfg.estimator
    if est == "mc":
        points = []
        for idx, shots in enumerate(MC_SHOTS):
            res = run_mc(spec, shots, seeded_rng(cfg.seed, rep, idx))
            points.append((shots, res.theta_hat, (shots, shots, 0, 0)))
        return points
    rng = seeded_rng(cfg.seed, rep)
    if est == "mlae":
        res = run_mlae(spec, cfg.M, cfg.h, rng)
    elif est == "vqae-adaptive":
        res = run_adaptive(spec, cfg.vqae(est), rng)
    else:
        vc = cfg.vqae(est)
        if est == "vqae-ideal":
            vc.charge_variational = False
        res = run_vqae(spec, vc, rng)
    history = res.ledger.history
    points = []
    for idx, (m, theta, _nq) in enumerate(res.trace):
        _, samp, var, loose = history[idx]
        points.append((m, theta, (samp + var + loose, samp, var, loose)))
    return points


def _run_reps(worker, tasks, threads: int):
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(worker, tasks))
    return [worker(t) for t in tasks]


def sweep_rows(cfg: RunConfig):
    """delta-theta-vs-cost table; one row per trace point."""
    spec = cfg.problem()
    theta_exact = float(np.arcsin(np.sqrt(exact_amplitude(spec))))
    per_rep = _run_reps(_sweep_rep, [(cfg, r) for r in range(cfg.reps)], cfg.threads)
    n_points = len(per_rep[0])
    rows = []
    for idx in range(n_points):
        label, _, costs = per_rep[0][idx]
        thetas = [rep[idx][1] for rep in per_rep]
        total, samp, var, loose = costs
        rows.append(
            (
                cfg.estimator, cfg.dist, cfg.n, cfg.C, label,
                total, samp, var, loose,
                rms_error(thetas, theta_exact), cfg.reps, cfg.seed,
            )
        )
    return rows


def _infidelity_rep(task):
    cfg, depth, rep = task
    spec = cfg.problem()
    vc = VqaeConfig(
        k=cfg.k,
        M=cfg.M,
        h=cfg.h,
        ansatz_kind="layered",
        depth=depth,
        optimizer=OptimizerConfig(learning_rate=cfg.lr, sweeps=cfg.ns, trials=0),
        charge_variational=False,
    )
    res = run_vqae(spec, vc, seeded_rng(cfg.seed, rep), trace=False,
                   track_infidelity=True)
    return res.infidelities


def infidelity_rows(cfg: RunConfig):
    """Mean/SEM infidelity over random inits: d-sweep at fixed m when several
    depths are given, otherwise an m-sweep at the single depth."""
    rows = []
    for depth in cfg.depths:
        tasks = [(cfg, depth, r) for r in range(cfg.reps)]
        traces = np.array(_run_reps(_infidelity_rep, tasks, cfg.threads))
        mean = traces.mean(axis=0)
        sem = traces.std(axis=0, ddof=1) / np.sqrt(cfg.reps) if cfg.reps > 1 \
            else np.zeros(traces.shape[1])
        if len(cfg.depths) > 1:
            rows.append((cfg.dist, depth, cfg.M, mean[-1], sem[-1], cfg.reps))
        else:
            for m in range(cfg.M + 1):
                rows.append((cfg.dist, depth, m, mean[m], sem[m], cfg.reps))
    return rows


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_expectation(cfg: RunConfig) -> int:
    spec = cfg.problem()
    table = tabulate(spec)
    a = exact_amplitude(spec)
    digest = hashlib.sha256(
        b"".join(b"%.12e" % v for v in table)
    ).hexdigest()[:16]
    print(f"dist={spec.kind} n={spec.n} C={_fmt(spec.C)}")
    print(f"a = {a:.12g}")
    print(f"theta = {float(np.arcsin(np.sqrt(a))):.12g}")
    print(f"table_sum = {table.sum():.12g}")
    print(f"table_checksum = {digest}")
    return 0


def cmd_sweep(cfg: RunConfig) -> int:
    rows = sweep_rows(cfg)
    write_csv(cfg.out, SWEEP_HEADER, rows)
    print(f"wrote {len(rows)} rows to {cfg.out}")
    return 0


def cmd_infidelity(cfg: RunConfig) -> int:
    rows = infidelity_rows(cfg)
    write_csv(cfg.out, INFIDELITY_HEADER, rows)
    print(f"wrote {len(rows)} rows to {cfg.out}")
    return 0


# ---------------------------------------------------------------------------
# argument handling
# ---------------------------------------------------------------------------

def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--dist", choices=KINDS, default="gaussian")
    p.add_argument("--n", type=int, default=5)
    p.add_argument("--mu", type=float, default=None)
    p.add_argument("--sigma", type=float, default=None)
    p.add_argument("--c0", type=float, default=None)
    p.add_argument("--c1", type=float, default=None)
    p.add_argument("--C", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=1234)
    p.add_argument("--config", type=str, default=None,
                   help="key=value file merged under the flags (flags win)")


def _add_run(p: argparse.ArgumentParser, default_out: str):
    p.add_argument("--M", type=int, default=50)
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--h", type=int, default=2000)
    p.add_argument("--l", type=int, default=1)
    p.add_argument("--nf", type=int, default=100)
    p.add_argument("--ns", type=int, default=100)
    p.add_argument("--depth", type=str, default="4",
                   help="PQC depth; a comma list sweeps d in the infidelity command")
    p.add_argument("--lr", type=float, default=1e-3)
    p.add_argument("--loose-shots", type=int, default=500_000)
    p.add_argument("--charge-variational", action=argparse.BooleanOptionalAction,
                   default=True)
    p.add_argument("--exact-gradient", action=argparse.BooleanOptionalAction,
                   default=False)
    p.add_argument("--reps", type=int, default=100)
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.add_argument("--out", type=str, default=default_out)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vqae")
    sub = parser.add_subparsers(dest="command", required=True)

    p_exp = sub.add_parser("expectation", help="print the exact amplitude")
    _add_common(p_exp)

    p_sweep = sub.add_parser("sweep", help="error-vs-cost CSV trace")
    _add_common(p_sweep)
    p_sweep.add_argument("--estimator", choices=ESTIMATORS, default="vqae-adaptive")
    _add_run(p_sweep, "sweep.csv")

    p_inf = sub.add_parser("infidelity", help="variational infidelity CSV")
    _add_common(p_inf)
    _add_run(p_inf, "infidelity.csv")
    return parser


def _load_config_flags(path: str) -> list:
    """Turn key=value lines into flag tokens inserted before user flags."""
    flags = []
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"bad config line (expected key=value): {raw!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            if key in ("charge-variational", "exact-gradient"):
                truthy = value.lower() in ("1", "true", "yes", "on")
                flags.append(f"--{key}" if truthy else f"--no-{key}")
            else:
                flags.extend([f"--{key}", value])
    return flags


def _merge_config(argv: list) -> list:
    path = None
    for i, tok in enumerate(argv):
        if tok == "--config" and i + 1 < len(argv):
            path = argv[i + 1]
        elif tok.startswith("--config="):
            path = tok.split("=", 1)[1]
    if path is None or not argv:
        return argv
    # insert right after the subcommand so explicit flags override (argparse
    # keeps the last occurrence of a repeated option)
    return argv[:1] + _load_config_flags(path) + argv[1:]


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    depths = tuple(int(tok) for tok in str(getattr(args, "depth", "4")).split(","))
    if not depths or any(d < 1 for d in depths):
        raise ValueError(f"bad depth list {getattr(args, 'depth', None)!r}")
    return RunConfig(
        command=args.command,
        dist=args.dist,
        n=args.n,
        mu=args.mu,
        sigma=args.sigma,
        c0=args.c0,
        c1=args.c1,
        C=args.C,
        estimator=getattr(args, "estimator", "vqae-adaptive"),
        M=getattr(args, "M", 50),
        k=getattr(args, "k", 10),
        h=getattr(args, "h", 2000),
        l=getattr(args, "l", 1),
        nf=getattr(args, "nf", 100),
        ns=getattr(args, "ns", 100),
        depths=depths,
        lr=getattr(args, "lr", 1e-3),
        loose_shots=getattr(args, "loose_shots", 500_000),
        charge_variational=getattr(args, "charge_variational", True),
        exact_gradient=getattr(args, "exact_gradient", False),
        reps=getattr(args, "reps", 100),
        seed=args.seed,
        threads=getattr(args, "threads", 1),
        out=getattr(args, "out", ""),
    )


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        argv = _merge_config(argv)
        args = parser.parse_args(argv)
        cfg = _config_from_args(args)
        if cfg.reps < 1:
            raise ValueError(f"reps must be >= 1, got {cfg.reps}")
        if cfg.command == "expectation":
            return cmd_expectation(cfg)
        if cfg.command == "sweep":
            return cmd_sweep(cfg)
        return cmd_infidelity(cfg)
    except InfeasibleRescaling as exc:
        print(f"error: infeasible rescaling: {exc}", file=sys.stderr)
        return 3
    except SystemExit as exc:
        return int(exc.code or 0)
    except (VqaeError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception:  # pragma: no cover - last-resort diagnostics
        traceback.print_exc()
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
