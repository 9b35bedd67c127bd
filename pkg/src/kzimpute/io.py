"""CSV ingestion/emission and run-config handling for the CLI.

Data-carrying cells (series values, truth sidecars) are written with full
round-trip precision so a re-ingested file reproduces the exact doubles;
the 9-significant-digit convention applies to metric output, not to data.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path

from .baselines import ImputerSpec, Method
from .bench import BenchConfig, DatasetRef
from .corruption import CorruptionPlan, Placement
from .errors import ColumnNotFoundError, ConfigError, ParseError
from .metrics import DEFAULT_JS_BINS
from .series import TimeSeries

DEFAULT_MISSING_TOKENS = ("", "NaN", "nan", "NA")


@dataclass(frozen=True)
class IngestOptions:
    delimiter: str = ","
    header: bool = True
    missing_tokens: tuple[str, ...] = DEFAULT_MISSING_TOKENS


def data_token(value: float) -> str:
    """Full-precision text for a series value; missing becomes empty."""
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return ""
    return repr(float(value))


def read_table(path, options: IngestOptions | None = None) -> tuple[list[str] | None, list[list[str]]]:
    """Whole CSV as (header, rows); header is None when options say so."""
    options = options or IngestOptions()
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh, delimiter=options.delimiter))
    if not rows:
        raise ParseError(1, "<empty file>")
    if options.header:
        return rows[0], rows[1:]
    return None, rows


def resolve_column(header: list[str] | None, column, n_fields: int) -> int:
    """Map a column name or index onto a field position."""
    if isinstance(column, int) or (isinstance(column, str) and column.isdigit() and header is None):
        idx = int(column)
        if not 0 <= idx < n_fields:
            raise ColumnNotFoundError(f"column index {idx} out of range (fields: {n_fields})")
        return idx
    if header is None:
        raise ColumnNotFoundError("file has no header; address the column by index")
    if column not in header:
        raise ColumnNotFoundError(f"column {column!r} not found (have: {', '.join(header)})")
    return header.index(column)


def parse_column(
    rows: list[list[str]],
    col_idx: int,
    options: IngestOptions,
    first_data_line: int,
) -> TimeSeries:
    """Parse one column to a series; non-numeric tokens fail with their line."""
    values: list[float] = []
    for offset, row in enumerate(rows):
        line_no = first_data_line + offset
        token = row[col_idx].strip() if col_idx < len(row) else ""
        if token in options.missing_tokens:
            values.append(math.nan)
            continue
        try:
            values.append(float(token))
        except ValueError:
            raise ParseError(line_no, token) from None
    if not values:
        raise ParseError(first_data_line, "<no data rows>")
    return TimeSeries(values)


def ingest_csv(path, column, options: IngestOptions | None = None) -> TimeSeries:
    """Read one numeric column of a CSV file as a time series."""
    options = options or IngestOptions()
    header, rows = read_table(path, options)
    n_fields = len(header) if header is not None else (len(rows[0]) if rows else 0)
    col_idx = resolve_column(header, column, n_fields)
    return parse_column(rows, col_idx, options, first_data_line=2 if options.header else 1)


# ---------------------------------------------------------------------------
# Run config (JSON)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RunConfig:
    bench: BenchConfig
    output_dir: str
    ingest: IngestOptions


def _require(data: dict, field: str, path: str):
    if field not in data:
        raise ConfigError(f"{path}{field}", "is required")
    return data[field]


def _parse_method(entry: dict, path: str) -> ImputerSpec:
    if not isinstance(entry, dict):
        raise ConfigError(path, "must be an object with a 'method' key")
    name = _require(entry, "method", f"{path}.")
    try:
        method = Method(name)
    except ValueError:
        raise ConfigError(f"{path}.method", f"unknown method {name!r}") from None
    params = entry.get("params", {})
    if not isinstance(params, dict):
        raise ConfigError(f"{path}.params", "must be an object")
    try:
        return ImputerSpec(method=method, params=params)
    except ValueError as exc:
        raise ConfigError(f"{path}.params", str(exc)) from None


def _parse_plan(entry: dict, path: str) -> CorruptionPlan:
    if not isinstance(entry, dict):
        raise ConfigError(path, "must be an object")
    try:
        return CorruptionPlan(
            seed=int(entry.get("seed", 0)),
            target_fraction=float(_require(entry, "target_fraction", f"{path}.")),
            gap_mix={int(k): float(v) for k, v in entry.get("gap_mix", {"1": 1.0}).items()},
            placement=Placement(entry.get("placement", "anywhere")),
        )
    except (ValueError, TypeError) as exc:
        raise ConfigError(path, str(exc)) from None


def _parse_dataset(entry: dict, base: Path, path: str) -> DatasetRef:
    if not isinstance(entry, dict):
        raise ConfigError(path, "must be an object with 'path' and 'column'")
    file_path = Path(str(_require(entry, "path", f"{path}.")))
    if not file_path.is_absolute():
        file_path = base / file_path
    column = _require(entry, "column", f"{path}.")
    name = entry.get("name") or file_path.stem
    return DatasetRef(name=str(name), path=str(file_path), column=column)


def parse_run_config(path) -> RunConfig:
    """Load and validate a JSON run config; paths resolve against its folder."""
    config_path = Path(path)
    try:
        data = json.loads(config_path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError("<document>", f"invalid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError("<document>", "top level must be an object")
    base = config_path.resolve().parent

    def int_field(name: str, default: int, minimum: int) -> int:
        value = data.get(name, default)
        if not isinstance(value, int) or isinstance(value, bool) or value < minimum:
            raise ConfigError(name, f"must be an integer >= {minimum}")
        return value

    master_seed = int_field("master_seed", 0, 0)
    trials = int_field("trials", 100, 1)
    repeats = int_field("repeats_for_timing", 3, 1)
    js_bins = int_field("js_bins", DEFAULT_JS_BINS, 2)

    methods_raw = _require(data, "methods", "")
    if not isinstance(methods_raw, list) or not methods_raw:
        raise ConfigError("methods", "must be a non-empty list")
    methods = tuple(_parse_method(m, f"methods[{i}]") for i, m in enumerate(methods_raw))

    plans_raw = _require(data, "plans", "")
    if not isinstance(plans_raw, list) or not plans_raw:
        raise ConfigError("plans", "must be a non-empty list")
    plans = tuple(_parse_plan(p, f"plans[{i}]") for i, p in enumerate(plans_raw))

    datasets_raw = _require(data, "datasets", "")
    if not isinstance(datasets_raw, list) or not datasets_raw:
        raise ConfigError("datasets", "must be a non-empty list")
    datasets = tuple(
        _parse_dataset(d, base, f"datasets[{i}]") for i, d in enumerate(datasets_raw)
    )

    references = data.get("reference_methods", ["ffill", "bfill"])
    if not isinstance(references, list):
        raise ConfigError("reference_methods", "must be a list of method names")
    method_keys = {spec.method.value for spec in methods}
    references = tuple(r for r in references if r in method_keys)

    ingest_raw = data.get("ingest", {})
    if not isinstance(ingest_raw, dict):
        raise ConfigError("ingest", "must be an object")
    ingest = IngestOptions(
        delimiter=str(ingest_raw.get("delimiter", ",")),
        header=bool(ingest_raw.get("header", True)),
        missing_tokens=tuple(ingest_raw.get("missing_tokens", DEFAULT_MISSING_TOKENS)),
    )

    outdir = Path(str(data.get("output_dir", "bench_out")))
    if not outdir.is_absolute():
        outdir = base / outdir

    try:
        bench = BenchConfig(
            master_seed=master_seed,
            methods=methods,
            plans=plans,
            datasets=datasets,
            trials=trials,
            repeats_for_timing=repeats,
            reference_methods=references,
            include_time_in_heatmap=bool(data.get("include_time_in_heatmap", False)),
            js_bins=js_bins,
        )
    except ConfigError:
        raise
    return RunConfig(bench=bench, output_dir=str(outdir), ingest=ingest)


__all__ = [
    "DEFAULT_MISSING_TOKENS",
    "IngestOptions",
    "RunConfig",
    "ingest_csv",
    "read_table",
    "resolve_column",
    "parse_column",
    "parse_run_config",
    "data_token",
]
