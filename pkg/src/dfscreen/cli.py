"""Command-line interface and all file I/O.

Subcommands: ``screen`` a CSV dataset, ``simulate`` a Monte-Carlo config,
and ``predict-split`` for split-sample prediction-error comparisons.
Exit codes: 2 for I/O and parse failures, 3 for contract violations (bad
link, bad response, bad parameters), 4 for a replication failure inside the
harness.
"""

from __future__ import annotations

import csv
import json
import logging
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import click
import numpy as np

from .exceptions import (
    CsvError,
    DataError,
    DegeneracyError,
    DFScreenError,
    NumericalError,
    ParameterError,
    ReplicationError,
)
from .links import inverse_link, link_name, parse_link, transform_response
from .screening import screen
from .simgen import (
    METHODS,
    ScenarioConfig,
    derive_seed,
    run_experiment,
    select_features,
)
from .tuning import ols_fit, ols_predict
from .validation import standardize_columns

_LOGGER = logging.getLogger("dfscreen")

EXIT_IO = 2
EXIT_CONTRACT = 3
EXIT_REPLICATION = 4

# short CLI method names -> harness identifiers
METHOD_ALIASES = {
    "tdf": "TDF",
    "fbic": "FBIC",
    "holp": "HOLP_EBIC",
    "sis": "SIS_TOPK",
    "wrh": "WRH_TOPK",
}


@dataclass(frozen=True)
class CsvDataset:
    """A parsed CSV: feature matrix, response vector, and the column names."""

    header: list[str]
    response_col: str
    feature_cols: list[str]
    X: np.ndarray
    y: np.ndarray


def load_csv(path: str, response_col: str) -> CsvDataset:
    """Read a comma-separated file with a header row into a dataset.

    Rejects missing/extra cells (naming the offending line), non-numeric
    values, duplicate headers, fewer than 2 rows, or no feature columns.
    """
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise CsvError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise CsvError(f"{path} is empty")
    header = [h.strip() for h in rows[0]]
    if len(set(header)) != len(header):
        raise CsvError(f"{path} has duplicate column names")
    if response_col not in header:
        raise DataError(
            f"response column {response_col!r} not found; columns are {header}"
        )
    y_pos = header.index(response_col)
    feature_cols = [h for i, h in enumerate(header) if i != y_pos]
    if not feature_cols:
        raise CsvError(f"{path} has no feature columns besides the response")

    data = []
    for line_no, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise CsvError(
                f"{path}: row {line_no} has {len(row)} cells, expected {len(header)}"
            )
        parsed = []
        for col, cell in zip(header, row):
            cell = cell.strip()
            if cell == "":
                raise CsvError(f"{path}: missing value in row {line_no}, column {col!r}")
            try:
                parsed.append(float(cell))
            except ValueError:
                raise CsvError(
                    f"{path}: non-numeric value {cell!r} in row {line_no}, column {col!r}"
                ) from None
        data.append(parsed)

    if len(data) < 2:
        raise CsvError(f"{path} needs at least 2 data rows, got {len(data)}")
    arr = np.asarray(data, dtype=float)
    y = arr[:, y_pos]
    X = np.delete(arr, y_pos, axis=1)
    return CsvDataset(header=header, response_col=response_col,
                      feature_cols=feature_cols, X=X, y=y)


def _configure_logging() -> None:
    level = os.environ.get("SCREEN_LOG", "error").lower()
    levels = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}
    logging.basicConfig(level=levels.get(level, logging.ERROR),
                        format="%(levelname)s %(name)s: %(message)s")


def _exit_for(exc: Exception) -> int:
    if isinstance(exc, ReplicationError):
        return EXIT_REPLICATION
    if isinstance(exc, CsvError):
        return EXIT_IO
    if isinstance(exc, (ParameterError, DataError, DegeneracyError, NumericalError)):
        return EXIT_CONTRACT
    if isinstance(exc, (OSError, json.JSONDecodeError)):
        return EXIT_IO
    return EXIT_CONTRACT if isinstance(exc, DFScreenError) else 1


def _guard(body):
    try:
        body()
    except Exception as exc:  # noqa: BLE001 - single funnel to exit codes
        code = _exit_for(exc)
        click.echo(f"error: {exc}", err=True)
        sys.exit(code)


@click.group()
def main():
    """Variable screening for high-dimensional regression."""
    _configure_logging()


@main.command("screen")
@click.option("--input", "csv_path", required=True, help="CSV file with a header row.")
@click.option("--response", "response_col", required=True, help="Response column name.")
@click.option("--link", "link_text", default="identity", show_default=True,
              help="identity | logit | log | power:1/3 | power:1/5")
@click.option("--lambda", "lam", type=float, default=None,
              help="Ridge shift; default schedule when omitted.")
@click.option("--c", "c", type=float, default=None,
              help="Stopping constant; cross-validated when omitted.")
@click.option("--standardize", type=click.Choice(["on", "off"]), default="on",
              show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", "out_path", default=None,
              help="Report JSON path; stdout when omitted.")
def cmd_screen(csv_path, response_col, link_text, lam, c, standardize, seed, out_path):
    """Screen a CSV dataset and write a JSON report."""

    def body():
        t0 = time.perf_counter()
        link = parse_link(link_text)
        data = load_csv(csv_path, response_col)
        result = screen(
            data.X, data.y, link,
            lam=lam, c=c,
            standardize=(standardize == "on"),
            seed=seed,
        )
        elapsed = time.perf_counter() - t0
        report = {
            "input": str(csv_path),
            "response": response_col,
            "link": link_name(link),
            "n": int(data.X.shape[0]),
            "p": int(data.X.shape[1]),
            "standardize": standardize == "on",
            "seed": seed,
            "lambda": result.lam,
            "c": result.c,
            "cv": None if result.cv is None else {
                "c_grid": list(result.cv.c_grid),
                "fold_errors": result.cv.fold_errors.tolist(),
                "mean_errors": result.cv.mean_errors.tolist(),
                "chosen_c": result.cv.chosen_c,
            },
            "selected": {
                "indices": [int(j) for j in result.selected],
                "names": [data.feature_cols[j] for j in result.selected],
            },
            "stop_step": result.stop_step,
            "thresholds": list(result.thresholds),
            "path": {
                "order": [int(j) for j in result.path.order],
                "names": [data.feature_cols[j] for j in result.path.order],
                "rss_per_step": list(result.path.rss_per_step),
                "decrements": list(result.path.decrements),
            },
            "elapsed_seconds": elapsed,
        }
        text = json.dumps(report, indent=2)
        if out_path is None:
            click.echo(text)
        else:
            Path(out_path).write_text(text + "\n", encoding="utf-8")
            _LOGGER.info("report written to %s", out_path)

    _guard(body)


def _load_config(config_path: str) -> tuple[ScenarioConfig, list[str]]:
    try:
        raw = json.loads(Path(config_path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise CsvError(f"cannot read {config_path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise CsvError(f"{config_path} is not valid JSON: {exc}") from exc

    required = {"scenario", "n", "p", "rho", "link", "beta", "replications",
                "seed", "methods"}
    missing = required - raw.keys()
    if missing:
        raise DataError(f"config is missing fields: {sorted(missing)}")

    p = int(raw["p"])
    beta_in = [float(b) for b in raw["beta"]]
    if len(beta_in) > p:
        raise DataError(f"beta has {len(beta_in)} entries but p={p}")
    beta = np.zeros(p)
    beta[: len(beta_in)] = beta_in

    methods = [METHOD_ALIASES.get(str(m).lower(), str(m).upper()) for m in raw["methods"]]
    for m in methods:
        if m not in METHODS:
            raise DataError(f"unknown method {m!r} in config; use one of {METHODS}")

    config = ScenarioConfig(
        scenario=str(raw["scenario"]).lower(),
        n=int(raw["n"]),
        p=p,
        rho=float(raw["rho"]),
        link=parse_link(str(raw["link"])),
        beta=beta,
        replications=int(raw["replications"]),
        seed=int(raw["seed"]),
    )
    return config, methods


def _write_metrics_csv(path: str, table) -> None:
    lines = ["method,metric,mean,sd"]
    for method, m in table.items():
        for metric, mean, sd in (
            ("tp", m.tp_mean, m.tp_sd),
            ("fp", m.fp_mean, m.fp_sd),
            ("cr", m.cr_mean, m.cr_sd),
        ):
            lines.append(f"{method},{metric},{mean:.6f},{sd:.6f}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _print_metrics_table(table) -> None:
    click.echo(f"{'method':<12}{'TP':>14}{'FP':>14}{'CR':>14}")
    for method, m in table.items():
        click.echo(
            f"{method:<12}"
            f"{m.tp_mean:>8.2f}({m.tp_sd:.2f})"
            f"{m.fp_mean:>8.2f}({m.fp_sd:.2f})"
            f"{m.cr_mean:>8.2f}({m.cr_sd:.2f})"
        )


def _dataset_writer(dump_dir: str):
    directory = Path(dump_dir)
    directory.mkdir(parents=True, exist_ok=True)

    def write(rep: int, X: np.ndarray, y: np.ndarray) -> None:
        p = X.shape[1]
        header = ",".join([f"x{j + 1}" for j in range(p)] + ["y"])
        body = "\n".join(
            ",".join(repr(float(v)) for v in row) + f",{float(yv)!r}"
            for row, yv in zip(X, y)
        )
        (directory / f"rep{rep:04d}.csv").write_text(
            header + "\n" + body + "\n", encoding="utf-8"
        )

    return write


@main.command("simulate")
@click.option("--config", "config_path", required=True, help="Experiment config JSON.")
@click.option("--out", "out_csv", required=True, help="Metrics CSV output path.")
@click.option("--threads", type=int, default=1, show_default=True)
@click.option("--dump", "dump_dir", default=None,
              help="Directory for per-replication dataset CSVs.")
def cmd_simulate(config_path, out_csv, threads, dump_dir):
    """Run a Monte-Carlo experiment from a config file."""

    def body():
        config, methods = _load_config(config_path)
        on_dataset = _dataset_writer(dump_dir) if dump_dir else None
        table = run_experiment(config, methods, n_jobs=threads, on_dataset=on_dataset)
        _write_metrics_csv(out_csv, table)
        _print_metrics_table(table)

    _guard(body)


def _split_once(X, y, link, method, lam, c, rep_seed):
    n = X.shape[0]
    perm = np.random.default_rng(rep_seed).permutation(n)
    halves = (perm[: n // 2], perm[n // 2:])
    fits = []
    for h, idx in enumerate(halves):
        sel = select_features(
            method, X[idx], y[idx], link,
            lam=lam, c=c, seed=derive_seed(rep_seed, h),
        )
        ystar_h = transform_response(y[idx], link).ystar
        coef = ols_fit(X[idx][:, sel], ystar_h)
        fits.append((sel, coef))

    total = 0.0
    for idx, (other_sel, other_coef) in zip(halves, reversed(fits)):
        pred = inverse_link(ols_predict(other_coef, X[idx][:, other_sel]), link)
        total += float(np.sum((y[idx] - pred) ** 2))
    sizes = [len(sel) for sel, _ in fits]
    return total / n, sizes


@main.command("predict-split")
@click.option("--input", "csv_path", required=True)
@click.option("--response", "response_col", required=True)
@click.option("--link", "link_text", default="identity", show_default=True)
@click.option("--method", "method_text",
              type=click.Choice(sorted(METHOD_ALIASES)), default="tdf",
              show_default=True)
@click.option("--lambda", "lam", type=float, default=None)
@click.option("--c", "c", type=float, default=None)
@click.option("--standardize", type=click.Choice(["on", "off"]), default="on",
              show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--repeats", type=int, default=100, show_default=True)
@click.option("--threads", type=int, default=1, show_default=True)
@click.option("--out", "out_csv", default=None, help="Summary CSV path.")
def cmd_predict_split(csv_path, response_col, link_text, method_text, lam, c,
                      standardize, seed, repeats, threads, out_csv):
    """Split-sample prediction error with cross-fitted estimators."""

    def body():
        link = parse_link(link_text)
        method = METHOD_ALIASES[method_text]
        data = load_csv(csv_path, response_col)
        n = data.X.shape[0]
        if n < 42:
            raise ParameterError(
                f"predict-split needs n >= 42 so each half has >= 21 rows, got {n}"
            )
        if repeats < 1:
            raise ParameterError("repeats must be >= 1")
        X = standardize_columns(data.X) if standardize == "on" else data.X

        def one(rep: int):
            return _split_once(X, data.y, link, method, lam, c,
                               derive_seed(seed, rep))

        if threads > 1 and repeats > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                outcomes = list(pool.map(one, range(repeats)))
        else:
            outcomes = [one(rep) for rep in range(repeats)]

        errors = np.array([e for e, _ in outcomes])
        sizes = [s for _, pair in outcomes for s in pair]
        q25, q50, q75 = np.percentile(errors, [25, 50, 75])
        sd = float(errors.std(ddof=1)) if errors.size > 1 else 0.0

        size_counts = {}
        for s in sizes:
            size_counts[s] = size_counts.get(s, 0) + 1

        lines = [
            "statistic,value",
            f"error_mean,{errors.mean():.6f}",
            f"error_sd,{sd:.6f}",
            f"error_q25,{q25:.6f}",
            f"error_median,{q50:.6f}",
            f"error_q75,{q75:.6f}",
        ]
        for s in sorted(size_counts):
            lines.append(f"size_{s},{size_counts[s]}")
        text = "\n".join(lines) + "\n"
        if out_csv is None:
            click.echo(text, nl=False)
        else:
            Path(out_csv).write_text(text, encoding="utf-8")
        click.echo(
            f"{method} over {repeats} splits: "
            f"error {errors.mean():.4f} (sd {sd:.4f}), "
            f"median model size {int(np.median(sizes))}",
            err=True,
        )

    _guard(body)


if __name__ == "__main__":
    main()
