"""Experiment harness and command-line interface.

``polygraph run`` reproduces the synthetic comparison: for each seed it
builds a known two-flavor polytope and its ground truth, generates smooth
signals, runs the two dense baselines and the two reduced solvers, scores
everything, and writes per-seed CSVs plus an aggregate summary. Outputs
are a pure function of the configuration: identical configs give
byte-identical files.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass, fields, replace
from pathlib import Path

import numpy as np

from .baselines import dong_learn, kalofolias_learn
from .graph_core import (
    ADJACENCY,
    LAPLACIAN,
    Laplacian,
    SimplexPoint,
    combine,
    read_matrix_csv,
    write_matrix_csv,
)
from .metrics import (
    DEFAULT_THRESHOLD,
    EvalRow,
    binarize,
    evaluate,
    f_measure,
    frobenius_error,
    nmi,
)
from .reduction import reduce_adjacency_model, reduce_laplacian_model
from .simplex_opt import solve_reduced_log, solve_reduced_qp
from .synth import (
    DEFAULT_GAMMA,
    DEFAULT_NOISE_SD,
    DEFAULT_RADIUS,
    make_ground_truth,
    pairwise_distances,
    random_geometric_graph,
    tikhonov_signals,
)

log = logging.getLogger("polygraph")

METHODS = ("baseline-laplacian", "proposed-qp", "baseline-adjacency", "proposed-log")

_SUMMARY_HEADER = ("method,nmi_mean,nmi_std,f_measure_mean,f_measure_std,"
                   "frobenius_mean,frobenius_std")
_ROW_HEADER = "method,nmi,f_measure,frobenius"


@dataclass(frozen=True)
class ExperimentConfig:
    n: int = 20
    m: int = 100
    p: int = 2
    theta_star: tuple = (0.4, 0.6)
    radius: float = DEFAULT_RADIUS
    gamma: float = DEFAULT_GAMMA
    noise_sd: float = DEFAULT_NOISE_SD
    alpha_lap: float = 0.1
    alpha_adj: float = 1.0
    beta_adj: float = 0.5
    threshold: float = DEFAULT_THRESHOLD
    seeds: tuple = (0,)
    output_dir: str = "polygraph-out"

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if self.m < 1:
            raise ValueError("m must be at least 1")
        if self.p < 2:
            raise ValueError("p must be at least 2")
        if len(self.theta_star) != self.p:
            raise ValueError("theta_star must have p entries")
        SimplexPoint(np.asarray(self.theta_star, dtype=np.float64))
        for name in ("radius", "gamma", "alpha_lap", "alpha_adj", "beta_adj"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be positive")
        if self.noise_sd < 0.0 or self.threshold < 0.0:
            raise ValueError("noise_sd and threshold must be nonnegative")
        if len(self.seeds) < 1 or any(int(s) < 0 for s in self.seeds):
            raise ValueError("seeds must be a nonempty list of nonnegative integers")
        object.__setattr__(self, "theta_star", tuple(float(t) for t in self.theta_star))
        object.__setattr__(self, "seeds", tuple(int(s) for s in self.seeds))


@dataclass(frozen=True)
class SeedOutcome:
    seed: int
    rows: tuple | None
    error: str | None


_FIELD_PARSERS = {
    "n": int,
    "m": int,
    "p": int,
    "theta_star": lambda s: tuple(float(x) for x in str(s).split(",")),
    "radius": float,
    "gamma": float,
    "noise_sd": float,
    "alpha_lap": float,
    "alpha_adj": float,
    "beta_adj": float,
    "threshold": float,
    "seeds": lambda s: tuple(int(x) for x in str(s).split(",")),
    "output_dir": str,
}


def load_config_file(path) -> dict:
    """Parse a flat key=value config file ('#' starts a comment)."""
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if key not in _FIELD_PARSERS:
            raise ValueError(f"{path}:{lineno}: unknown config key {key!r}")
        values[key] = _FIELD_PARSERS[key](value.strip())
    return values


def build_config(file_values: dict | None = None, **overrides) -> ExperimentConfig:
    """Defaults, then config-file values, then explicit overrides."""
    merged = dict(file_values or {})
    for key, value in overrides.items():
        if value is not None:
            merged[key] = value
    return ExperimentConfig(**merged)


def render_heat_data(matrix, path) -> None:
    """Write a matrix as heatmap-ready CSV.

    Laplacian off-diagonals are written as absolute values so the visual
    scale matches the adjacency panels; everything else is written as-is.
    """
    if isinstance(matrix, Laplacian):
        m = np.abs(matrix.entries) * (1.0 - np.eye(matrix.n)) \
            + np.diag(np.diag(matrix.entries))
    elif hasattr(matrix, "weights"):
        m = matrix.weights
    else:
        m = np.asarray(matrix, dtype=np.float64)
    if not np.all(np.isfinite(m)):
        raise ValueError("heatmap data must be finite")
    write_matrix_csv(path, m)


def _run_seed(config: ExperimentConfig, seed: int):
    gt_lap = make_ground_truth(config.n, config.p, config.theta_star,
                               LAPLACIAN, seed, radius=config.radius)
    gt_adj = make_ground_truth(config.n, config.p, config.theta_star,
                               ADJACENCY, seed, radius=config.radius)
    signal_seed = np.random.SeedSequence(seed).spawn(config.p + 1)[config.p]
    signals = tikhonov_signals(gt_lap.graph, config.m, config.gamma,
                               config.noise_sd, signal_seed)
    dist = pairwise_distances(signals)

    lap_base, _ = dong_learn(signals, config.alpha_lap)
    qp_model = reduce_laplacian_model(gt_lap.basis, signals, config.alpha_lap)
    lap_prop = combine(gt_lap.basis, solve_reduced_qp(qp_model).theta)

    adj_base, _ = kalofolias_learn(dist, config.alpha_adj, config.beta_adj)
    log_model = reduce_adjacency_model(gt_adj.basis, dist,
                                       config.alpha_adj, config.beta_adj)
    adj_prop = combine(gt_adj.basis, solve_reduced_log(log_model).theta)

    rows = (
        evaluate(METHODS[0], gt_lap.graph, lap_base, config.threshold),
        evaluate(METHODS[1], gt_lap.graph, lap_prop, config.threshold),
        evaluate(METHODS[2], gt_adj.graph, adj_base, config.threshold),
        evaluate(METHODS[3], gt_adj.graph, adj_prop, config.threshold),
    )
    panels = {
        "heat_laplacian_truth.csv": gt_lap.graph,
        "heat_laplacian_baseline.csv": lap_base,
        "heat_laplacian_proposed.csv": lap_prop,
        "heat_adjacency_truth.csv": gt_adj.graph,
        "heat_adjacency_baseline.csv": adj_base,
        "heat_adjacency_proposed.csv": adj_prop,
    }
    return rows, panels


def _write_lines(path: Path, lines) -> None:
    path.write_text("\n".join(lines) + "\n")


def summarize(outcomes) -> list:
    """Aggregate mean/std CSV lines over the successful seeds."""
    lines = [_SUMMARY_HEADER]
    done = [o for o in outcomes if o.rows is not None]
    for idx, method in enumerate(METHODS):
        nmis = np.array([o.rows[idx].nmi for o in done])
        fs = np.array([o.rows[idx].f_measure for o in done])
        fros = np.array([o.rows[idx].frobenius for o in done])
        lines.append(
            f"{method},{nmis.mean():.6f},{nmis.std():.6f},"
            f"{fs.mean():.6f},{fs.std():.6f},{fros.mean():.6f},{fros.std():.6f}"
        )
    return lines


def run_experiment(config: ExperimentConfig) -> list:
    """Run every seed, write all artifacts, and return per-seed outcomes.

    A failing seed is logged and skipped; the others proceed. Raises only
    when no seed succeeds.
    """
    out_root = Path(config.output_dir)
    out_root.mkdir(parents=True, exist_ok=True)
    outcomes = []
    for seed in config.seeds:
        try:
            rows, panels = _run_seed(config, seed)
        except Exception as exc:  # noqa: BLE001 - per-seed isolation is the contract
            log.warning("seed %d failed: %s", seed, exc)
            outcomes.append(SeedOutcome(seed, None, str(exc)))
            continue
        seed_dir = out_root / f"seed_{seed:04d}"
        seed_dir.mkdir(parents=True, exist_ok=True)
        _write_lines(seed_dir / "metrics.csv",
                     [_ROW_HEADER, *(r.csv_line() for r in rows)])
        for name, matrix in panels.items():
            render_heat_data(matrix, seed_dir / name)
        outcomes.append(SeedOutcome(seed, rows, None))
    done = [o for o in outcomes if o.rows is not None]
    if not done:
        raise RuntimeError("every seed failed; nothing to aggregate")
    _write_lines(out_root / "results.csv",
                 ["seed," + _ROW_HEADER,
                  *(f"{o.seed},{r.csv_line()}" for o in done for r in o.rows)])
    _write_lines(out_root / "summary.csv", summarize(outcomes))
    return outcomes


def _cmd_run(args) -> int:
    file_values = load_config_file(args.config) if args.config else None
    config = build_config(
        file_values,
        n=args.n, m=args.m, p=args.p,
        theta_star=tuple(float(x) for x in args.theta_star.split(",")) if args.theta_star else None,
        radius=args.radius, gamma=args.gamma, noise_sd=args.noise_sd,
        alpha_lap=args.alpha_lap, alpha_adj=args.alpha_adj,
        beta_adj=args.beta_adj, threshold=args.threshold,
        seeds=tuple(int(x) for x in args.seeds.split(",")) if args.seeds else None,
        output_dir=args.output_dir,
    )
    outcomes = run_experiment(config)
    for line in summarize(outcomes):
        print(line)
    failed = [o for o in outcomes if o.rows is None]
    for o in failed:
        print(f"seed {o.seed} failed: {o.error}", file=sys.stderr)
    return 0


def _cmd_metrics(args) -> int:
    truth = read_matrix_csv(args.truth)
    learned = read_matrix_csv(args.learned)
    t_pat = binarize(truth, args.threshold)
    l_pat = binarize(learned, args.threshold)
    row = EvalRow(args.method, nmi(t_pat, l_pat), f_measure(t_pat, l_pat),
                  frobenius_error(truth, learned))
    print(_ROW_HEADER)
    print(row.csv_line())
    return 0


def _cmd_gen(args) -> int:
    adjacency = random_geometric_graph(args.n, args.radius, args.seed)
    if args.out:
        write_matrix_csv(args.out, adjacency.weights)
    else:
        write_matrix_csv(sys.stdout, adjacency.weights)
    return 0


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polygraph",
        description="Polytope-constrained graph learning benchmark",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the synthetic benchmark")
    run.add_argument("--config", help="flat key=value config file")
    run.add_argument("--n", type=int)
    run.add_argument("--m", type=int)
    run.add_argument("--p", type=int)
    run.add_argument("--theta-star", dest="theta_star",
                     help="comma-separated convex weights, e.g. 0.4,0.6")
    run.add_argument("--radius", type=float)
    run.add_argument("--gamma", type=float)
    run.add_argument("--noise-sd", dest="noise_sd", type=float)
    run.add_argument("--alpha-lap", dest="alpha_lap", type=float)
    run.add_argument("--alpha-adj", dest="alpha_adj", type=float)
    run.add_argument("--beta-adj", dest="beta_adj", type=float)
    run.add_argument("--threshold", type=float)
    run.add_argument("--seeds", help="comma-separated seeds, e.g. 0,1,2")
    run.add_argument("--output-dir", dest="output_dir")
    run.set_defaults(func=_cmd_run)

    met = sub.add_parser("metrics", help="score a learned matrix against a truth matrix")
    met.add_argument("--truth", required=True)
    met.add_argument("--learned", required=True)
    met.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD)
    met.add_argument("--method", default="learned")
    met.set_defaults(func=_cmd_metrics)

    gen = sub.add_parser("gen", help="emit a random geometric graph as CSV")
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--radius", type=float, required=True)
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--out", help="output path (stdout when omitted)")
    gen.set_defaults(func=_cmd_gen)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(format="%(levelname)s %(name)s: %(message)s")
    args = _parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
