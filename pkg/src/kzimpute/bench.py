"""Benchmark harness: repeated corrupt -> impute -> score trials.

Within a trial every method receives the same corrupted series (enforced by
hashing the input before each call), so per-method differences come only
from the methods themselves. Per-trial seeds derive from the master seed and
the (dataset, plan, trial) indices, making runs reproducible and mergeable.

Numeric values are canonicalised to 9 significant digits the moment a trial
row is created; aggregates are computed from those canonical values, so
re-rendering reports from the persisted per-trial rows reproduces the
original summary byte for byte.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
from dataclasses import dataclass, field as dc_field
from pathlib import Path

import numpy as np

from . import baselines
from .corruption import GENERATOR_NAME, CorruptionPlan, corrupt
from .errors import ConfigError, ZeroReferenceError
from .metrics import DEFAULT_JS_BINS, score, timed
from .series import TimeSeries

#: Metric columns in report order; Time is tracked per trial but kept out of
#: summary.csv and the default heatmap because wall clock is not reproducible.
METRIC_COLUMNS = (
    "MAE",
    "RMSE",
    "MAPE",
    "NRMSE",
    "R2",
    "JS_Divergence",
    "Wasserstein",
    "Correlation_Diff",
)
TIME_COLUMN = "Time"
HIGHER_BETTER = frozenset({"R2"})

REPORT_FILE = "report.csv"
SUMMARY_CSV_FILE = "summary.csv"
SUMMARY_MD_FILE = "summary.md"
HEATMAP_FILE = "heatmap.csv"
META_FILE = "run_meta.json"


def fmt_num(x) -> str:
    """Canonical 9-significant-digit rendering; None becomes an empty cell."""
    if x is None:
        return ""
    x = float(x)
    if math.isnan(x):
        return ""
    return format(x, ".9g")


def canon(x):
    """Round a value through its serialized form so aggregates match files."""
    if x is None:
        return None
    x = float(x)
    if math.isnan(x):
        return None
    return float(fmt_num(x))


def derive_seed(master_seed: int, *path: int) -> int:
    """Stable per-trial seed from the master seed and index path."""
    ss = np.random.SeedSequence([int(master_seed), *[int(p) for p in path]])
    return int(ss.generate_state(1, np.uint64)[0])


@dataclass(frozen=True)
class DatasetRef:
    name: str
    path: str
    column: str


@dataclass(frozen=True)
class BenchConfig:
    master_seed: int
    methods: tuple[baselines.ImputerSpec, ...]
    plans: tuple[CorruptionPlan, ...]
    datasets: tuple[DatasetRef, ...]
    trials: int = 100
    repeats_for_timing: int = 3
    reference_methods: tuple[str, ...] = ("ffill", "bfill")
    include_time_in_heatmap: bool = False
    js_bins: int = DEFAULT_JS_BINS

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigError("trials", "must be >= 1")
        if self.repeats_for_timing < 1:
            raise ConfigError("repeats_for_timing", "must be >= 1")
        if not self.methods:
            raise ConfigError("methods", "at least one method is required")
        if not self.plans:
            raise ConfigError("plans", "at least one plan is required")
        if not self.datasets:
            raise ConfigError("datasets", "at least one dataset is required")
        keys = [spec.method.value for spec in self.methods]
        if len(set(keys)) != len(keys):
            raise ConfigError("methods", "method names must be unique")
        for ref in self.reference_methods:
            if ref not in keys:
                raise ConfigError(
                    "reference_methods", f"{ref!r} is not among the configured methods"
                )


@dataclass(frozen=True)
class TrialRow:
    """One (dataset, plan, method, trial) metric record, canonicalised."""

    dataset: str
    plan: str
    plan_desc: str
    method: str
    label: str
    trial: int
    seed: int
    coverage: float
    metrics: dict
    evaluated_points: int
    mape_skipped_zeros: int


@dataclass(frozen=True)
class AggregateRow:
    dataset: str
    plan: str
    plan_desc: str
    method: str
    label: str
    trials: int
    coverage_mean: float
    means: dict
    stds: dict
    improvements: dict = dc_field(default_factory=dict)


@dataclass(frozen=True)
class BenchReport:
    trial_rows: tuple[TrialRow, ...]
    aggregates: tuple[AggregateRow, ...]
    heatmap: tuple[dict, ...]
    metadata: dict


def improvement_pct(reference_error: float, candidate_error: float) -> float:
    """Signed percentage by which the candidate beats the reference.

    100 * (reference - candidate) / reference: positive when the candidate's
    error is lower, negative when it is worse.
    """
    if reference_error <= 0:
        raise ZeroReferenceError("reference error must be positive")
    if candidate_error < 0:
        raise ValueError("candidate error cannot be negative")
    return 100.0 * (reference_error - candidate_error) / reference_error


def normalize_for_heatmap(
    group_rows: list[AggregateRow], include_time: bool = False
) -> list[dict]:
    """Min-max normalise one (dataset, plan) block so 1.0 is best everywhere.

    Lower-is-better metrics are inverted; R^2 is not. A constant column maps
    to 1.0 for every method; a column with missing entries stays empty.
    """
    if len(group_rows) < 2:
        raise ValueError("heatmap normalisation needs at least two methods")
    columns = METRIC_COLUMNS + ((TIME_COLUMN,) if include_time else ())
    out = [
        {"dataset": r.dataset, "plan": r.plan, "method": r.method, "label": r.label}
        for r in group_rows
    ]
    for col in columns:
        vals = [r.means.get(col) for r in group_rows]
        if any(v is None for v in vals):
            for row in out:
                row[col] = None
            continue
        lo, hi = min(vals), max(vals)
        for row, v in zip(out, vals):
            if hi == lo:
                row[col] = 1.0
            elif col in HIGHER_BETTER:
                row[col] = (v - lo) / (hi - lo)
            else:
                row[col] = (hi - v) / (hi - lo)
    return out


def _score_trial(truth, outcome, original, seconds, js_bins) -> tuple[dict, float, int, int]:
    """Metric dict for one method run, scored on the positions it filled."""
    values = outcome.series.values
    covered = [(i, v) for i, v in truth if not math.isnan(values[i])]
    coverage = len(covered) / len(truth) if truth else 1.0
    if not covered:
        metrics = {c: None for c in METRIC_COLUMNS}
        metrics[TIME_COLUMN] = canon(seconds)
        return metrics, coverage, 0, 0
    report = score(
        covered,
        outcome.series,
        original=original,
        time_seconds=seconds,
        js_bins=js_bins,
    )
    metrics = {
        "MAE": canon(report.mae),
        "RMSE": canon(report.rmse),
        "MAPE": canon(report.mape),
        "NRMSE": canon(report.nrmse),
        "R2": canon(report.r2),
        "JS_Divergence": canon(report.js_divergence),
        "Wasserstein": canon(report.wasserstein),
        "Correlation_Diff": canon(report.correlation_diff),
        TIME_COLUMN: canon(report.time_seconds),
    }
    return metrics, coverage, report.evaluated_points, report.mape_skipped_zeros


def run_bench(
    config: BenchConfig,
    inline_datasets: dict[str, TimeSeries] | None = None,
) -> BenchReport:
    """Execute the full trial grid and aggregate the results.

    Datasets come from their CSV paths unless ``inline_datasets`` supplies a
    loaded series per dataset name.
    """
    from .io import ingest_csv  # local import: io depends on nothing above

    loaded: list[tuple[DatasetRef, TimeSeries]] = []
    for ref in config.datasets:
        if inline_datasets and ref.name in inline_datasets:
            series = inline_datasets[ref.name]
        else:
            series = ingest_csv(ref.path, ref.column)
        loaded.append((ref, series))

    rows: list[TrialRow] = []
    for d_idx, (ref, original) in enumerate(loaded):
        for p_idx, plan in enumerate(config.plans):
            plan_id = f"plan{p_idx}"
            plan_desc = plan.describe()
            for trial in range(config.trials):
                seed = derive_seed(config.master_seed, d_idx, p_idx, trial)
                pair = corrupt(original, plan.with_seed(seed))
                trial_hash = hashlib.sha256(pair.corrupted.values.tobytes()).hexdigest()
                for spec in config.methods:
                    if hashlib.sha256(pair.corrupted.values.tobytes()).hexdigest() != trial_hash:
                        raise RuntimeError(
                            "corrupted input changed between methods within a trial"
                        )
                    outcome, seconds = timed(
                        lambda: baselines.impute(spec, pair.corrupted),
                        repeats=config.repeats_for_timing,
                    )
                    metrics, coverage, points, skipped0 = _score_trial(
                        pair.truth, outcome, original, seconds, config.js_bins
                    )
                    rows.append(
                        TrialRow(
                            dataset=ref.name,
                            plan=plan_id,
                            plan_desc=plan_desc,
                            method=spec.method.value,
                            label=spec.label,
                            trial=trial,
                            seed=seed,
                            coverage=canon(coverage),
                            metrics=metrics,
                            evaluated_points=points,
                            mape_skipped_zeros=skipped0,
                        )
                    )

    aggregates = aggregate(rows, config.reference_methods)
    heatmap = build_heatmap(aggregates, include_time=config.include_time_in_heatmap)
    metadata = {
        "master_seed": config.master_seed,
        "generator": GENERATOR_NAME,
        "trials": config.trials,
        "repeats_for_timing": config.repeats_for_timing,
        "nrmse_divisor": "truth value range",
        "distribution_sample": "blanked positions only",
        "gap_mix_weight_basis": "gap count",
        "reference_methods": list(config.reference_methods),
        "include_time_in_heatmap": config.include_time_in_heatmap,
    }
    return BenchReport(
        trial_rows=tuple(rows),
        aggregates=tuple(aggregates),
        heatmap=tuple(heatmap),
        metadata=metadata,
    )


def aggregate(rows: list[TrialRow], reference_methods=()) -> list[AggregateRow]:
    """Per-(dataset, plan, method) means and sample standard deviations.

    Means are recomputable from persisted rows by construction: the rows are
    already canonical, and None cells are excluded rather than zero-filled.
    """
    groups: dict[tuple[str, str], dict[str, list[TrialRow]]] = {}
    descs: dict[tuple[str, str], str] = {}
    labels: dict[tuple[str, str, str], str] = {}
    for row in rows:
        key = (row.dataset, row.plan)
        groups.setdefault(key, {}).setdefault(row.method, []).append(row)
        descs[key] = row.plan_desc
        labels[(row.dataset, row.plan, row.method)] = row.label

    out: list[AggregateRow] = []
    all_columns = METRIC_COLUMNS + (TIME_COLUMN,)
    for (dataset, plan), by_method in groups.items():
        for method, rs in by_method.items():
            means: dict = {}
            stds: dict = {}
            for col in all_columns:
                vals = [r.metrics[col] for r in rs if r.metrics[col] is not None]
                if vals:
                    means[col] = float(np.mean(vals))
                    stds[col] = float(np.std(vals, ddof=1)) if len(vals) > 1 else 0.0
                else:
                    means[col] = None
                    stds[col] = None
            out.append(
                AggregateRow(
                    dataset=dataset,
                    plan=plan,
                    plan_desc=descs[(dataset, plan)],
                    method=method,
                    label=labels[(dataset, plan, method)],
                    trials=len(rs),
                    coverage_mean=float(np.mean([r.coverage for r in rs])),
                    means=means,
                    stds=stds,
                )
            )

    for ref_method in reference_methods:
        by_group: dict[tuple[str, str], float | None] = {}
        for agg in out:
            if agg.method == ref_method:
                by_group[(agg.dataset, agg.plan)] = agg.means.get("MAE")
        for agg in out:
            ref_mae = by_group.get((agg.dataset, agg.plan))
            if ref_mae is not None and ref_mae > 0 and agg.means.get("MAE") is not None:
                agg.improvements[f"impr_mae_vs_{ref_method}"] = improvement_pct(
                    ref_mae, agg.means["MAE"]
                )
            else:
                agg.improvements[f"impr_mae_vs_{ref_method}"] = None
    return out


def build_heatmap(aggregates: list[AggregateRow], include_time: bool = False) -> list[dict]:
    """Normalised rows for every (dataset, plan) block with >= 2 methods."""
    grouped: dict[tuple[str, str], list[AggregateRow]] = {}
    for agg in aggregates:
        grouped.setdefault((agg.dataset, agg.plan), []).append(agg)
    rows: list[dict] = []
    for group_rows in grouped.values():
        if len(group_rows) >= 2:
            rows.extend(normalize_for_heatmap(group_rows, include_time=include_time))
    return rows


# ---------------------------------------------------------------------------
# Artifact writers / readers
# ---------------------------------------------------------------------------

_REPORT_FIELDS = (
    ["dataset", "plan", "plan_desc", "method", "label", "trial", "seed", "coverage"]
    + list(METRIC_COLUMNS)
    + [TIME_COLUMN, "evaluated_points", "mape_skipped_zeros"]
)


def write_report_csv(path, rows: list[TrialRow]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(_REPORT_FIELDS)
        for r in rows:
            record = [
                r.dataset,
                r.plan,
                r.plan_desc,
                r.method,
                r.label,
                r.trial,
                r.seed,
                fmt_num(r.coverage),
            ]
            record += [fmt_num(r.metrics[c]) for c in METRIC_COLUMNS]
            record += [fmt_num(r.metrics[TIME_COLUMN]), r.evaluated_points, r.mape_skipped_zeros]
            writer.writerow(record)


def load_trial_rows(path) -> list[TrialRow]:
    rows: list[TrialRow] = []
    with open(path, newline="") as fh:
        for rec in csv.DictReader(fh):
            metrics = {c: (float(rec[c]) if rec[c] != "" else None) for c in METRIC_COLUMNS}
            metrics[TIME_COLUMN] = float(rec[TIME_COLUMN]) if rec[TIME_COLUMN] != "" else None
            rows.append(
                TrialRow(
                    dataset=rec["dataset"],
                    plan=rec["plan"],
                    plan_desc=rec["plan_desc"],
                    method=rec["method"],
                    label=rec["label"],
                    trial=int(rec["trial"]),
                    seed=int(rec["seed"]),
                    coverage=float(rec["coverage"]),
                    metrics=metrics,
                    evaluated_points=int(rec["evaluated_points"]),
                    mape_skipped_zeros=int(rec["mape_skipped_zeros"]),
                )
            )
    return rows


def write_summary_csv(path, aggregates: list[AggregateRow]) -> None:
    impr_cols: list[str] = []
    for agg in aggregates:
        for key in agg.improvements:
            if key not in impr_cols:
                impr_cols.append(key)
    header = (
        ["dataset", "plan", "plan_desc", "method", "label", "trials", "coverage_mean"]
        + [f"{c}_mean" for c in METRIC_COLUMNS]
        + [f"{c}_std" for c in METRIC_COLUMNS]
        + impr_cols
    )
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for agg in aggregates:
            record = [
                agg.dataset,
                agg.plan,
                agg.plan_desc,
                agg.method,
                agg.label,
                agg.trials,
                fmt_num(agg.coverage_mean),
            ]
            record += [fmt_num(agg.means[c]) for c in METRIC_COLUMNS]
            record += [fmt_num(agg.stds[c]) for c in METRIC_COLUMNS]
            record += [fmt_num(agg.improvements.get(c)) for c in impr_cols]
            writer.writerow(record)


def write_heatmap_csv(path, heatmap_rows: list[dict], include_time: bool = False) -> None:
    columns = METRIC_COLUMNS + ((TIME_COLUMN,) if include_time else ())
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["dataset", "plan", "method", "label"] + list(columns))
        for row in heatmap_rows:
            writer.writerow(
                [row["dataset"], row["plan"], row["method"], row["label"]]
                + [fmt_num(row.get(c)) for c in columns]
            )


def write_summary_md(path, report: BenchReport) -> None:
    lines = ["# Imputation benchmark summary", ""]
    for key in sorted(report.metadata):
        lines.append(f"- {key}: {report.metadata[key]}")
    lines.append("")

    grouped: dict[tuple[str, str, str], list[AggregateRow]] = {}
    for agg in report.aggregates:
        grouped.setdefault((agg.dataset, agg.plan, agg.plan_desc), []).append(agg)

    for (dataset, plan, plan_desc), group in grouped.items():
        lines.append(f"## {dataset} — {plan} ({plan_desc})")
        lines.append("")
        impr_cols = list(group[0].improvements.keys()) if group else []
        header = ["Method"] + list(METRIC_COLUMNS) + ["Time (s)"] + impr_cols
        lines.append("| " + " | ".join(header) + " |")
        lines.append("|" + "---|" * len(header))
        for agg in group:
            cells = [agg.label]
            cells += [fmt_num(agg.means[c]) or "—" for c in METRIC_COLUMNS]
            cells.append(fmt_num(agg.means[TIME_COLUMN]) or "—")
            cells += [fmt_num(agg.improvements.get(c)) or "—" for c in impr_cols]
            lines.append("| " + " | ".join(cells) + " |")
        partial = [agg for agg in group if agg.coverage_mean < 1.0]
        if partial:
            lines.append("")
            lines.append(
                "Partial coverage (scored on filled positions only): "
                + ", ".join(f"{agg.label} {fmt_num(agg.coverage_mean)}" for agg in partial)
            )
        lines.append("")

    with open(path, "w") as fh:
        fh.write("\n".join(lines))


def write_all(outdir, report: BenchReport) -> dict[str, str]:
    """Write report.csv, summary.csv, summary.md, heatmap.csv, run_meta.json."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    include_time = bool(report.metadata.get("include_time_in_heatmap", False))
    paths = {
        "report": outdir / REPORT_FILE,
        "summary_csv": outdir / SUMMARY_CSV_FILE,
        "summary_md": outdir / SUMMARY_MD_FILE,
        "heatmap": outdir / HEATMAP_FILE,
        "meta": outdir / META_FILE,
    }
    write_report_csv(paths["report"], list(report.trial_rows))
    write_summary_csv(paths["summary_csv"], list(report.aggregates))
    write_summary_md(paths["summary_md"], report)
    write_heatmap_csv(paths["heatmap"], list(report.heatmap), include_time=include_time)
    paths["meta"].write_text(json.dumps(report.metadata, sort_keys=True, indent=2) + "\n")
    return {k: str(v) for k, v in paths.items()}


def load_metadata(outdir) -> dict:
    meta_path = Path(outdir) / META_FILE
    if meta_path.exists():
        return json.loads(meta_path.read_text())
    return {}


__all__ = [
    "METRIC_COLUMNS",
    "TIME_COLUMN",
    "DatasetRef",
    "BenchConfig",
    "TrialRow",
    "AggregateRow",
    "BenchReport",
    "improvement_pct",
    "normalize_for_heatmap",
    "build_heatmap",
    "run_bench",
    "aggregate",
    "derive_seed",
    "fmt_num",
    "canon",
    "write_report_csv",
    "write_summary_csv",
    "write_summary_md",
    "write_heatmap_csv",
    "write_all",
    "load_trial_rows",
    "load_metadata",
]
