"""Sweep tables (CSV/JSON) and the flat key-value run configuration."""

import csv
import io
import json
import math

from .capacity import CapacityKind, CapacityValue
from .experiments import ActivationRecord, InputParams

CSV_FIELDS = ("T", "Nbar_env", "nbar_in", "x", "y", "Ic_bits", "capacity_bits", "capacity_kind", "gap_bits")
ERROR_KIND = "error"


class ConfigError(ValueError):
    pass


def fmt(v):
    """17 significant digits: enough to round-trip any double."""
    return format(float(v), ".17g")


def record_row(rec):
    """Flat dict with the CSV field names; floats stay floats."""
    return {
        "T": rec.T,
        "Nbar_env": rec.N,
        "nbar_in": rec.nbar,
        "x": rec.params.x if rec.params else math.nan,
        "y": rec.params.y if rec.params else math.nan,
        "Ic_bits": rec.i_c,
        "capacity_bits": rec.cap.value if rec.cap else math.nan,
        "capacity_kind": rec.cap.kind.value if rec.cap else ERROR_KIND,
        "gap_bits": rec.gap,
    }


def row_record(row):
    kind = row["capacity_kind"]
    x, y = float(row["x"]), float(row["y"])
    params = None if math.isnan(x) or math.isnan(y) else InputParams(x, y)
    cap = None if kind == ERROR_KIND else CapacityValue(float(row["capacity_bits"]), CapacityKind(kind))
    return ActivationRecord(
        T=float(row["T"]),
        N=float(row["Nbar_env"]),
        nbar=float(row["nbar_in"]),
        params=params,
        i_c=float(row["Ic_bits"]),
        h_out=math.nan,
        cap=cap,
        gap=float(row["gap_bits"]),
        error=ERROR_KIND if cap is None else None,
    )


def to_csv(records, stamp=None):
    buf = io.StringIO()
    if stamp:
        buf.write(f"# {stamp}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for rec in records:
        row = record_row(rec)
        writer.writerow([row[k] if k == "capacity_kind" else fmt(row[k]) for k in CSV_FIELDS])
    return buf.getvalue()


def from_csv(text):
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    reader = csv.DictReader(lines)
    if tuple(reader.fieldnames or ()) != CSV_FIELDS:
        raise ValueError(f"unexpected CSV header {reader.fieldnames}")
    return [row_record(r) for r in reader]


def to_json(records):
    return json.dumps([record_row(r) for r in records], indent=1) + "\n"


def from_json(text):
    return [row_record(r) for r in json.loads(text)]


def parse_float_list(text):
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError as exc:
        raise ConfigError(f"bad number list {text!r}") from exc


def parse_config(text, allowed):
    """Parse ``key = value`` lines; ``#`` starts a comment. Unknown or repeated keys are errors."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in allowed:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in out:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        out[key] = value
    return out
