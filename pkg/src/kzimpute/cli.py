"""Command-line front door: impute, corrupt, bench, and report.

Exit codes: 0 success, 1 usage or config validation, 2 data error
(unreadable file, bad column, infeasible plan, ...), 3 internal failure.
"""

from __future__ import annotations

import csv
import sys
from pathlib import Path

import click

from . import baselines, bench as bench_mod
from .baselines import ImputerSpec, Method
from .corruption import CorruptionPlan, Placement, corrupt
from .errors import ConfigError, KZImputeError
from .io import IngestOptions, data_token, ingest_csv, parse_column, parse_run_config, read_table, resolve_column

_METHOD_CHOICES = [m.value for m in Method]
_PLACEMENT_CHOICES = [p.value for p in Placement]


@click.group(name="kzimpute")
def cli():
    """Gap-aware time-series imputation and its benchmark harness."""


def _load_column(input_path, column, delimiter, header):
    options = IngestOptions(delimiter=delimiter, header=header)
    table_header, rows = read_table(input_path, options)
    n_fields = len(table_header) if table_header is not None else len(rows[0])
    col_idx = resolve_column(table_header, column, n_fields)
    series = parse_column(rows, col_idx, options, first_data_line=2 if header else 1)
    return options, table_header, rows, col_idx, series


def _write_table(path, header, rows, delimiter):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, delimiter=delimiter, lineterminator="\n")
        if header is not None:
            writer.writerow(header)
        writer.writerows(rows)


@cli.command("impute")
@click.option("--input", "input_path", required=True, help="Input CSV file.")
@click.option("--column", required=True, help="Column name (or index without a header).")
@click.option(
    "--method",
    default="kz",
    show_default=True,
    type=click.Choice(_METHOD_CHOICES),
    help="Imputation method.",
)
@click.option("--max-gap-size", default=5, show_default=True, help="Gap ceiling for the kz method.")
@click.option("--out", "out_path", required=True, help="Output CSV file.")
@click.option("--delimiter", default=",", show_default=True)
@click.option("--no-header", is_flag=True, help="Input file has no header row.")
def cmd_impute(input_path, column, method, max_gap_size, out_path, delimiter, no_header):
    """Fill the target column and write the table with an audit column."""
    _, header, rows, col_idx, series = _load_column(input_path, column, delimiter, not no_header)
    params = {"max_gap_size": max_gap_size} if method == "kz" else {}
    outcome = baselines.impute(ImputerSpec(Method(method), params), series)

    filled = {i for i, _ in outcome.filled}
    col_name = header[col_idx] if header is not None else f"col{col_idx}"
    out_rows = []
    for i, row in enumerate(rows):
        row = list(row) + [""] * (col_idx + 1 - len(row))
        if i in filled:
            row[col_idx] = data_token(float(outcome.series.values[i]))
        out_rows.append(row + ["1" if i in filled else "0"])
    out_header = list(header) + [f"{col_name}_imputed"] if header is not None else None
    _write_table(out_path, out_header, out_rows, delimiter)
    click.echo(f"filled={len(outcome.filled)} skipped={len(outcome.skipped)}")
    for note in outcome.notes:
        click.echo(f"note: {note}")


def _parse_mix(text: str) -> dict[int, float]:
    mix: dict[int, float] = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if ":" in part:
            size, weight = part.split(":", 1)
        else:
            size, weight = part, "1"
        try:
            mix[int(size)] = float(weight)
        except ValueError:
            raise ConfigError("--mix", f"cannot parse entry {part!r}") from None
    if not mix:
        raise ConfigError("--mix", "no gap sizes given")
    return mix


@cli.command("corrupt")
@click.option("--input", "input_path", required=True, help="Complete input CSV file.")
@click.option("--column", required=True)
@click.option("--fraction", required=True, type=float, help="Target missing fraction in (0,1).")
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--mix", default="1:1", show_default=True, help="Gap mix, e.g. '1:1,3:2'.")
@click.option(
    "--placement",
    default="anywhere",
    show_default=True,
    type=click.Choice(_PLACEMENT_CHOICES),
)
@click.option("--out", "out_path", required=True, help="Corrupted CSV file.")
@click.option("--truth-out", "truth_path", default=None, help="Truth sidecar (default: <out>.truth.csv).")
@click.option("--delimiter", default=",", show_default=True)
@click.option("--no-header", is_flag=True)
def cmd_corrupt(
    input_path, column, fraction, seed, mix, placement, out_path, truth_path, delimiter, no_header
):
    """Blank cells MCAR-style and keep the removed values in a sidecar."""
    _, header, rows, col_idx, series = _load_column(input_path, column, delimiter, not no_header)
    plan = CorruptionPlan(
        seed=seed,
        target_fraction=fraction,
        gap_mix=_parse_mix(mix),
        placement=Placement(placement),
    )
    pair = corrupt(series, plan)
    blanked = {i for i, _ in pair.truth}

    out_rows = []
    for i, row in enumerate(rows):
        row = list(row) + [""] * (col_idx + 1 - len(row))
        if i in blanked:
            row[col_idx] = ""
        out_rows.append(row)
    _write_table(out_path, header, out_rows, delimiter)

    truth_path = truth_path or f"{out_path}.truth.csv"
    with open(truth_path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["index", "true_value"])
        for idx, value in pair.truth:
            writer.writerow([idx, data_token(value)])
    click.echo(f"blanked={len(pair.truth)} seed={plan.seed} truth={truth_path}")


@cli.command("bench")
@click.option("--config", "config_path", required=True, help="JSON run config.")
@click.option("--out", "out_dir", default=None, help="Override the config's output directory.")
def cmd_bench(config_path, out_dir):
    """Run the full corrupt/impute/score grid and write the report files."""
    run_config = parse_run_config(config_path)
    inline = {
        ref.name: ingest_csv(ref.path, ref.column, run_config.ingest)
        for ref in run_config.bench.datasets
    }
    report = bench_mod.run_bench(run_config.bench, inline_datasets=inline)
    paths = bench_mod.write_all(out_dir or run_config.output_dir, report)
    click.echo(f"trial rows: {len(report.trial_rows)}")
    for name in ("report", "summary_csv", "summary_md", "heatmap"):
        click.echo(f"wrote {paths[name]}")


@cli.command("report")
@click.option("--dir", "report_dir", required=True, help="Directory holding report.csv.")
@click.option(
    "--format",
    "fmt",
    default="all",
    show_default=True,
    type=click.Choice(["all", "csv", "md"]),
)
def cmd_report(report_dir, fmt):
    """Re-render summary/heatmap artifacts from persisted per-trial rows."""
    report_dir = Path(report_dir)
    rows = bench_mod.load_trial_rows(report_dir / bench_mod.REPORT_FILE)
    metadata = bench_mod.load_metadata(report_dir)
    references = tuple(metadata.get("reference_methods", ()))
    include_time = bool(metadata.get("include_time_in_heatmap", False))

    aggregates = bench_mod.aggregate(rows, references)
    heatmap = bench_mod.build_heatmap(aggregates, include_time=include_time)
    report = bench_mod.BenchReport(
        trial_rows=tuple(rows),
        aggregates=tuple(aggregates),
        heatmap=tuple(heatmap),
        metadata=metadata,
    )
    if fmt in ("all", "csv"):
        bench_mod.write_summary_csv(report_dir / bench_mod.SUMMARY_CSV_FILE, aggregates)
        bench_mod.write_heatmap_csv(
            report_dir / bench_mod.HEATMAP_FILE, heatmap, include_time=include_time
        )
        click.echo(f"wrote {report_dir / bench_mod.SUMMARY_CSV_FILE}")
        click.echo(f"wrote {report_dir / bench_mod.HEATMAP_FILE}")
    if fmt in ("all", "md"):
        bench_mod.write_summary_md(report_dir / bench_mod.SUMMARY_MD_FILE, report)
        click.echo(f"wrote {report_dir / bench_mod.SUMMARY_MD_FILE}")


def main(argv=None) -> int:
    """Entry point with the documented exit-code mapping."""
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except click.exceptions.Exit as exc:
        return int(exc.exit_code)
    except click.UsageError as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        return 1
    except click.ClickException as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        return 1
    except click.Abort:
        click.echo("aborted", err=True)
        return 1
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        return 1
    except (FileNotFoundError, KZImputeError) as exc:
        click.echo(f"data error: {exc}", err=True)
        return 2
    except Exception as exc:  # pragma: no cover - defensive
        click.echo(f"internal error: {exc!r}", err=True)
        return 3


if __name__ == "__main__":
    sys.exit(main())
