"""On-disk formats used by the command line.

* series: headerless CSV, one row per time step, k columns
* grid results: CSV with a ``# schema=1 spec=<json>`` first line, then a header
* estimate reports: JSON or aligned text
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict

import numpy as np

from .core import EstimateReport, TimeSeries, ValidationError
from .montecarlo import (
    ESTIMATORS,
    SCHEMA_VERSION,
    EstimatorStats,
    GridResult,
    GridSpec,
    PointRecord,
)


class FormatError(ValidationError):
    """Malformed input file."""


def _fmt(x) -> str:
    return "" if x is None else repr(float(x))


def write_series(series: TimeSeries, fh) -> None:
    for row in series.as_matrix():
        fh.write(",".join(repr(float(v)) for v in row) + "\n")


def read_series(fh) -> TimeSeries:
    rows = []
    for lineno, line in enumerate(fh, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            rows.append([float(tok) for tok in line.split(",")])
        except ValueError:
            raise FormatError(f"line {lineno}: not a comma-separated list of numbers") from None
    if not rows:
        raise FormatError("series file is empty")
    if len({len(r) for r in rows}) != 1:
        raise FormatError("rows have differing column counts")
    try:
        return TimeSeries(np.array(rows))
    except ValidationError as exc:
        raise FormatError(str(exc)) from None


GRID_COLUMNS = ["row", "col", "psi1", "psi2", "classification", "min_modulus", "reps"] + [
    f"{name}_{field}"
    for name in ESTIMATORS
    for field in ("mse", "mse_psi1", "mse_psi2", "n_ok", "n_fail")
]


def write_grid(result: GridResult, fh) -> None:
    spec = asdict(result.spec)
    fh.write(f"# schema={result.schema} spec={json.dumps(spec, sort_keys=True)}\n")
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(GRID_COLUMNS)
    for rec in result.records:
        row = [rec.row, rec.col, _fmt(rec.psi1), _fmt(rec.psi2), rec.classification,
               _fmt(rec.min_modulus), rec.reps]
        for name in ESTIMATORS:
            st = rec.stats[name]
            per = st.mse_per_param or (None, None)
            row += [_fmt(st.mse), _fmt(per[0]), _fmt(per[1]), st.n_ok, st.n_fail]
        w.writerow(row)


def _opt(s: str):
    return None if s == "" else float(s)


def read_grid(fh) -> GridResult:
    text = fh.read()
    lines = text.splitlines()
    if not lines or not lines[0].startswith("# schema="):
        raise FormatError("missing '# schema=' header line")
    head = lines[0][2:]
    try:
        schema_part, spec_part = head.split(" spec=", 1)
        schema = int(schema_part.split("=", 1)[1])
        spec_dict = json.loads(spec_part)
        spec_dict["psi1_range"] = tuple(spec_dict["psi1_range"])
        spec_dict["psi2_range"] = tuple(spec_dict["psi2_range"])
        spec = GridSpec(**spec_dict)
    except (ValueError, KeyError, TypeError) as exc:
        raise FormatError(f"bad header line: {exc}") from None
    if schema != SCHEMA_VERSION:
        raise FormatError(f"unsupported schema {schema}")
    reader = csv.reader(io.StringIO("\n".join(lines[1:])))
    header = next(reader, None)
    if header != GRID_COLUMNS:
        raise FormatError("unexpected column header")
    records = []
    for n, row in enumerate(reader, start=3):
        if not row:
            continue
        if len(row) != len(GRID_COLUMNS):
            raise FormatError(f"line {n}: expected {len(GRID_COLUMNS)} fields, got {len(row)}")
        try:
            stats = {}
            base = 7
            for name in ESTIMATORS:
                mse, m1, m2, n_ok, n_fail = row[base : base + 5]
                per = None if m1 == "" else (float(m1), float(m2))
                stats[name] = EstimatorStats(_opt(mse), per, int(n_ok), int(n_fail))
                base += 5
            records.append(PointRecord(int(row[0]), int(row[1]), float(row[2]), float(row[3]),
                                       row[4], float(row[5]), stats, int(row[6])))
        except ValueError as exc:
            raise FormatError(f"line {n}: {exc}") from None
    return GridResult(spec, records, schema)


def report_to_json(report: EstimateReport) -> str:
    return json.dumps(report.to_dict(), indent=2)


def report_to_text(report: EstimateReport) -> str:
    psi = np.asarray(report.psi_hat)
    se = None if report.stderr is None else np.asarray(report.stderr)
    lines = [f"method   {report.method}", f"l        {report.stage1.l}", f"q        {report.q}"]
    if psi.ndim == 1:
        lines.append(f"{'param':<8} {'estimate':>14} {'stderr':>14}")
        for i, v in enumerate(psi, start=1):
            s = "" if se is None else f"{se[i - 1]:14.6g}"
            lines.append(f"psi_{i:<4} {v:14.6g} {s:>14}")
    else:
        for i, M in enumerate(psi, start=1):
            lines.append(f"Psi_{i}")
            for r, row in enumerate(M):
                vals = " ".join(f"{v:12.6g}" for v in row)
                if se is not None:
                    vals += "   (" + " ".join(f"{v:.3g}" for v in se[i - 1][r]) + ")"
                lines.append("  " + vals)
    for key, val in report.diagnostics.items():
        lines.append(f"{key:<18} {val}")
    return "\n".join(lines) + "\n"
