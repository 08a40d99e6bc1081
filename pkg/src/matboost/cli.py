"""Command-line interface: run experiments, score pools, generate data.

Every subcommand requires an explicit ``--seed`` and stamps its full
configuration into comment lines at the top of each file it writes, so any
output can be regenerated from its own header.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import click
import numpy as np

from . import __version__
from .baselines import (
    KATZ_BETA_GRID,
    SHC_XI_GRID,
    CommonNeighborsScorer,
    KatzScorer,
    RandomScorer,
    SpectralScorer,
)
from .boosting import MatBoost
from .dataio import (
    load_vertices,
    parse_incidence,
    provenance_header,
    write_incidence,
    write_table,
    write_vertices,
)
from .evaluation import (
    AlgorithmSpec,
    ExperimentSpec,
    TrialRecord,
    ExperimentResult,
    generate_negative_pool,
    generate_synthetic,
    run_single_trial,
)
from .hypermatrix import mask_off, project
from .matching import MatchConfig, solve_ilsq_oracle, solve_lasso

ALGORITHM_NAMES = ("matboost", "hcn", "hkatz", "shc", "random")

_RESULT_COLUMNS = (
    "algorithm",
    "missing_count",
    "trial",
    "auc",
    "recovered",
    "runtime_s",
)

_matboost_options = [
    click.option("--latent-dim", default=8, show_default=True, type=int),
    click.option("--reg", default=0.01, show_default=True, type=float),
    click.option(
        "--learning-rate", default=0.01, show_default=True, type=float
    ),
    click.option("--epochs", default=100, show_default=True, type=int),
    click.option("--l1-penalty", default=0.1, show_default=True, type=float),
    click.option("--lasso-steps", default=500, show_default=True, type=int),
    click.option(
        "--lasso-step-size", default=1e-3, show_default=True, type=float
    ),
    click.option(
        "--lasso-tolerance", default=1e-6, show_default=True, type=float
    ),
    click.option(
        "--max-iterations", default=10, show_default=True, type=int
    ),
]

_baseline_options = [
    click.option(
        "--katz-beta",
        default="cv",
        show_default=True,
        help="Damping factor, or 'cv' to pick it by cross-validation.",
    ),
    click.option(
        "--katz-path-length", default=5, show_default=True, type=int
    ),
    click.option(
        "--shc-xi",
        default="cv",
        show_default=True,
        help="Propagation strength, or 'cv' to pick it by cross-validation.",
    ),
]


def _add_options(options):
    def wrap(func):
        for option in reversed(options):
            func = option(func)
        return func

    return wrap


def _build_matboost(opts: dict) -> MatBoost:
    return MatBoost(
        latent_dim=opts["latent_dim"],
        reg=opts["reg"],
        learning_rate=opts["learning_rate"],
        epochs=opts["epochs"],
        l1_penalty=opts["l1_penalty"],
        max_steps=opts["lasso_steps"],
        step_size=opts["lasso_step_size"],
        lasso_tolerance=opts["lasso_tolerance"],
        max_iterations=opts["max_iterations"],
        random_state=opts["seed"],
    )


def _parse_cv_value(raw: str, flag: str) -> float | None:
    if raw.strip().lower() == "cv":
        return None
    try:
        return float(raw)
    except ValueError:
        raise click.ClickException(
            f"{flag} must be a number or 'cv', got '{raw}'"
        )


def _algorithm_spec(name: str, opts: dict) -> AlgorithmSpec:
    if name == "matboost":
        return AlgorithmSpec(name, _build_matboost(opts))
    if name == "hcn":
        return AlgorithmSpec(name, CommonNeighborsScorer())
    if name == "hkatz":
        beta = _parse_cv_value(opts["katz_beta"], "--katz-beta")
        est = KatzScorer(max_path_length=opts["katz_path_length"])
        if beta is None:
            return AlgorithmSpec(
                name, est, cv_param="beta", cv_grid=KATZ_BETA_GRID
            )
        return AlgorithmSpec(name, est.set_params(beta=beta))
    if name == "shc":
        xi = _parse_cv_value(opts["shc_xi"], "--shc-xi")
        if xi is None:
            return AlgorithmSpec(
                name, SpectralScorer(), cv_param="xi", cv_grid=SHC_XI_GRID
            )
        return AlgorithmSpec(name, SpectralScorer(xi=xi))
    if name == "random":
        return AlgorithmSpec(name, RandomScorer(random_state=opts["seed"]))
    raise click.ClickException(
        f"unknown algorithm '{name}'; choose from "
        f"{', '.join(ALGORITHM_NAMES)}"
    )


def _load_dataset(vertices_path, hyperlinks_path, negatives_path=None):
    try:
        vertices = load_vertices(vertices_path)
        full = parse_incidence(hyperlinks_path, vertices)
        negatives = (
            parse_incidence(negatives_path, vertices)
            if negatives_path is not None
            else None
        )
    except (FileNotFoundError, ValueError) as exc:
        raise click.ClickException(str(exc))
    return vertices, full, negatives


@click.group()
@click.version_option(version=__version__)
def main() -> None:
    """Hyperlink prediction toolkit."""
    logging.basicConfig(level=logging.INFO, format="%(message)s")


@main.command()
@click.option("--vertices", "vertices_path", required=True, type=click.Path())
@click.option(
    "--hyperlinks", "hyperlinks_path", required=True, type=click.Path()
)
@click.option(
    "--negatives", "negatives_path", required=True, type=click.Path()
)
@click.option(
    "--algorithms",
    default="matboost,hcn,hkatz,shc,random",
    show_default=True,
    help="Comma-separated algorithm names to run.",
)
@click.option(
    "--missing-counts",
    required=True,
    help="Comma-separated numbers of hyperlinks to delete per trial.",
)
@click.option("--trials", default=12, show_default=True, type=int)
@click.option("--seed", required=True, type=int)
@click.option(
    "--out-dir", required=True, type=click.Path(file_okay=False)
)
@click.option(
    "--jobs",
    default=1,
    show_default=True,
    type=int,
    help="Worker processes for independent trials.",
)
@_add_options(_matboost_options)
@_add_options(_baseline_options)
def experiment(**opts) -> None:
    """Deletion-recovery experiment over one dataset."""
    _, full, negatives = _load_dataset(
        opts["vertices_path"], opts["hyperlinks_path"], opts["negatives_path"]
    )
    try:
        names = [
            n.strip() for n in opts["algorithms"].split(",") if n.strip()
        ]
        missing_counts = tuple(
            int(x) for x in str(opts["missing_counts"]).split(",") if x.strip()
        )
        algorithms = tuple(_algorithm_spec(n, opts) for n in names)
        spec = ExperimentSpec(
            dataset=str(opts["hyperlinks_path"]),
            algorithms=algorithms,
            missing_counts=missing_counts,
            trials=opts["trials"],
            seed=opts["seed"],
        )
        for mc in missing_counts:
            if mc >= full.num_columns:
                raise ValueError(
                    f"missing_count {mc} is not below the hyperlink "
                    f"count {full.num_columns}"
                )
    except ValueError as exc:
        raise click.ClickException(str(exc))

    out_dir = Path(opts["out_dir"])
    out_dir.mkdir(parents=True, exist_ok=True)
    header = provenance_header(
        {
            "tool": f"matboost {__version__}",
            "command": "experiment",
            **{k: v for k, v in sorted(opts.items())},
        }
    )

    jobs = [(mc, t) for mc in missing_counts for t in range(opts["trials"])]
    result = ExperimentResult()
    failure: Exception | None = None
    try:
        if opts["jobs"] > 1:
            with ProcessPoolExecutor(max_workers=opts["jobs"]) as pool:
                futures = [
                    pool.submit(run_single_trial, full, negatives, spec, mc, t)
                    for mc, t in jobs
                ]
                for fut in futures:
                    result.records.extend(fut.result())
        else:
            for mc, t in jobs:
                result.records.extend(
                    run_single_trial(full, negatives, spec, mc, t)
                )
    except (ValueError, np.linalg.LinAlgError) as exc:
        failure = exc

    _write_results(out_dir, header, result)
    if failure is not None:
        raise click.ClickException(
            f"experiment aborted after {len(result.records)} records "
            f"(partial results written to {out_dir}): {failure}"
        )
    click.echo(f"wrote {out_dir / 'trials.tsv'} and {out_dir / 'summary.tsv'}")
    for row in result.summarize():
        click.echo(
            f"{row['algorithm']:>10}  missing={row['missing_count']:<4d} "
            f"auc={row['auc_mean']:.3f}±{row['auc_std']:.3f}  "
            f"recovered={row['recovered_mean']:.2f}±{row['recovered_std']:.2f}"
        )


def _write_results(out_dir: Path, header, result: ExperimentResult) -> None:
    ordered = sorted(
        result.records,
        key=lambda r: (r.missing_count, r.trial, r.algorithm),
    )
    write_table(
        out_dir / "trials.tsv",
        _RESULT_COLUMNS,
        [
            (
                r.algorithm,
                r.missing_count,
                r.trial,
                f"{r.auc:.6f}",
                r.recovered,
                f"{r.runtime_s:.4f}",
            )
            for r in ordered
        ],
        header=header,
    )
    summary_rows = result.summarize()
    write_table(
        out_dir / "summary.tsv",
        (
            "algorithm",
            "missing_count",
            "trials",
            "auc_mean",
            "auc_std",
            "recovered_mean",
            "recovered_std",
            "runtime_s_mean",
        ),
        [
            (
                row["algorithm"],
                row["missing_count"],
                row["trials"],
                f"{row['auc_mean']:.6f}",
                f"{row['auc_std']:.6f}",
                f"{row['recovered_mean']:.4f}",
                f"{row['recovered_std']:.4f}",
                f"{row['runtime_s_mean']:.4f}",
            )
            for row in summary_rows
        ],
        header=header,
    )


@main.command()
@click.option("--vertices", "vertices_path", required=True, type=click.Path())
@click.option(
    "--hyperlinks", "hyperlinks_path", required=True, type=click.Path()
)
@click.option("--pool", "pool_path", required=True, type=click.Path())
@click.option(
    "--algorithm",
    default="matboost",
    show_default=True,
    type=click.Choice(ALGORITHM_NAMES),
)
@click.option("--seed", required=True, type=int)
@click.option("--out", "out_path", required=True, type=click.Path())
@_add_options(_matboost_options)
@_add_options(_baseline_options)
def score(**opts) -> None:
    """Rank a candidate pool against a training hypernetwork."""
    vertices, full, _ = _load_dataset(
        opts["vertices_path"], opts["hyperlinks_path"]
    )
    try:
        pool = parse_incidence(opts["pool_path"], vertices)
    except (FileNotFoundError, ValueError) as exc:
        raise click.ClickException(str(exc))
    if pool.num_columns == 0:
        raise click.ClickException(
            f"candidate pool {opts['pool_path']} is empty"
        )
    spec = _algorithm_spec(opts["algorithm"], opts)
    if spec.cv_param is not None:
        raise click.ClickException(
            f"--algorithm {opts['algorithm']} needs an explicit "
            f"hyperparameter for scoring (cross-validation is only run "
            f"inside experiments)"
        )
    try:
        scores = spec.estimator.fit(full).decision_function(pool)
        order = spec.estimator.rank(pool)
    except ValueError as exc:
        raise click.ClickException(str(exc))
    header = provenance_header(
        {
            "tool": f"matboost {__version__}",
            "command": "score",
            **{k: v for k, v in sorted(opts.items())},
        }
    )
    write_table(
        opts["out_path"],
        ("rank", "candidate_index", "score", "vertices"),
        [
            (
                rank + 1,
                int(c),
                f"{scores[c]:.6f}",
                "|".join(vertices[v] for v in pool.columns[c]),
            )
            for rank, c in enumerate(order.tolist())
        ],
        header=header,
    )
    click.echo(f"wrote {opts['out_path']}")


@main.command()
@click.option(
    "--out-dir", required=True, type=click.Path(file_okay=False)
)
@click.option("--num-vertices", required=True, type=int)
@click.option("--num-hyperlinks", required=True, type=int)
@click.option("--num-negatives", required=True, type=int)
@click.option("--cardinality-min", default=2, show_default=True, type=int)
@click.option("--cardinality-max", default=4, show_default=True, type=int)
@click.option("--overlap-bias", default=1.0, show_default=True, type=float)
@click.option("--seed", required=True, type=int)
def generate(**opts) -> None:
    """Generate a synthetic dataset: vertices, hyperlinks, negatives."""
    card = (opts["cardinality_min"], opts["cardinality_max"])
    try:
        full = generate_synthetic(
            opts["num_vertices"],
            opts["num_hyperlinks"],
            card,
            opts["overlap_bias"],
            opts["seed"],
        )
        negatives = generate_negative_pool(
            full,
            opts["num_negatives"],
            card,
            opts["overlap_bias"],
            opts["seed"],
        )
    except ValueError as exc:
        raise click.ClickException(str(exc))
    out_dir = Path(opts["out_dir"])
    out_dir.mkdir(parents=True, exist_ok=True)
    width = max(3, len(str(max(opts["num_vertices"] - 1, 0))))
    names = [f"v{i:0{width}d}" for i in range(opts["num_vertices"])]
    header = provenance_header(
        {
            "tool": f"matboost {__version__}",
            "command": "generate",
            **{k: v for k, v in sorted(opts.items())},
        }
    )
    write_vertices(out_dir / "vertices.txt", names, header=header)
    write_incidence(out_dir / "hyperlinks.txt", full, names, header=header)
    write_incidence(
        out_dir / "negatives.txt", negatives, names, header=header
    )
    click.echo(
        f"wrote {out_dir / 'vertices.txt'}, {out_dir / 'hyperlinks.txt'}, "
        f"{out_dir / 'negatives.txt'}"
    )


@main.command()
@click.option("--vertices", "vertices_path", required=True, type=click.Path())
@click.option(
    "--hyperlinks", "hyperlinks_path", required=True, type=click.Path()
)
@click.option("--pool", "pool_path", required=True, type=click.Path())
@click.option("--missing", "missing_path", required=True, type=click.Path())
@click.option("--seed", required=True, type=int)
@click.option("--l1-penalty", default=0.01, show_default=True, type=float)
@click.option("--lasso-steps", default=5000, show_default=True, type=int)
@click.option(
    "--lasso-step-size", default=0.05, show_default=True, type=float
)
@click.option("--out", "out_path", default=None, type=click.Path())
def oracle(**opts) -> None:
    """Compare exhaustive 0/1 matching with the relaxed solver.

    Builds the matching target from the held-out hyperlinks in --missing
    (their projection restricted to entries absent from training) and
    reports, per candidate, the exact 0/1 weight and the relaxed weight.
    Only small pools are accepted; this is a correctness diagnostic.
    """
    vertices, full, _ = _load_dataset(
        opts["vertices_path"], opts["hyperlinks_path"]
    )
    try:
        pool = parse_incidence(opts["pool_path"], vertices)
        missing = parse_incidence(opts["missing_path"], vertices)
        a = project(full)
        target = mask_off(project(missing), a)
        exact = solve_ilsq_oracle(pool, target, a)
        relaxed = solve_lasso(
            pool,
            target,
            a,
            MatchConfig(
                l1_penalty=opts["l1_penalty"],
                max_steps=opts["lasso_steps"],
                step_size=opts["lasso_step_size"],
            ),
        )
    except (FileNotFoundError, ValueError) as exc:
        raise click.ClickException(str(exc))
    rounded = (relaxed >= 0.5).astype(float)
    agree = bool(np.array_equal(exact, rounded))
    rows = [
        (
            c,
            f"{exact[c]:.0f}",
            f"{relaxed[c]:.6f}",
            f"{rounded[c]:.0f}",
            "|".join(vertices[v] for v in pool.columns[c]),
        )
        for c in range(pool.num_columns)
    ]
    for row in rows:
        click.echo("\t".join(str(x) for x in row))
    click.echo(
        "rounded relaxation matches the exhaustive support"
        if agree
        else "rounded relaxation differs from the exhaustive support"
    )
    if opts["out_path"] is not None:
        header = provenance_header(
            {
                "tool": f"matboost {__version__}",
                "command": "oracle",
                **{k: v for k, v in sorted(opts.items())},
                "support_agreement": agree,
            }
        )
        write_table(
            opts["out_path"],
            ("candidate_index", "exact", "relaxed", "rounded", "vertices"),
            rows,
            header=header,
        )
        click.echo(f"wrote {opts['out_path']}")


if __name__ == "__main__":
    main()
