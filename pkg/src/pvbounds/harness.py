"""Sweep orchestration, configuration files and report emission."""
from __future__ import annotations

import csv
import io
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .records import STATUSES, Summary, VerificationRecord
from .statements import DEFAULT_SEED, STATEMENTS, execute

CSV_HEADER = ["statement", "params", "lhs", "rhs", "margin", "status", "runtime_ms"]
FORMATS = ("csv", "json")


class ConfigError(ValueError):
    """Bad configuration or usage; maps to exit code 2."""


@dataclass
class SweepConfig:
    statements: list[str]
    params: dict[str, Any] = field(default_factory=dict)
    seed: int = DEFAULT_SEED
    out: str | None = None
    format: str = "csv"
    workers: int = 1
    timing: bool = False

    def validate(self):
        if not self.statements:
            raise ConfigError("no statements selected")
        unknown = [s for s in self.statements if s not in STATEMENTS]
        if unknown:
            raise ConfigError(f"unknown statement id(s): {', '.join(unknown)}")
        if self.format not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")

    def params_for(self, sid: str) -> dict:
        """Global keys, overridden by keys written as '<statement>.<key>'."""
        out = {k: v for k, v in self.params.items() if "." not in k}
        prefix = sid + "."
        out.update({k[len(prefix):]: v for k, v in self.params.items() if k.startswith(prefix)})
        return out


RESERVED = {"statements", "seed", "out", "format", "workers", "timing"}


def parse_config_text(text: str) -> dict[str, str]:
    """key = value lines; '#' starts a comment; blank lines ignored."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        if not key:
            raise ConfigError(f"line {lineno}: empty key")
        out[key] = value
    return out


def config_from_mapping(kv: dict[str, str], **overrides) -> SweepConfig:
    kv = dict(kv)
    for k, v in overrides.items():
        if v is not None:
            kv[k] = v
    try:
        stmts = kv.get("statements", "")
        if isinstance(stmts, str):
            stmts = [s.strip() for s in stmts.split(",") if s.strip()]
        cfg = SweepConfig(
            statements=list(stmts),
            params={k: v for k, v in kv.items() if k not in RESERVED},
            seed=int(kv.get("seed", DEFAULT_SEED)),
            out=kv.get("out"),
            format=str(kv.get("format", "csv")),
            workers=int(kv.get("workers", 1)),
            timing=str(kv.get("timing", "false")).lower() in ("1", "true", "yes"),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    cfg.validate()
    return cfg


def load_config(path: str, **overrides) -> SweepConfig:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return config_from_mapping(parse_config_text(text), **overrides)


# ---------------------------------------------------------------------------
# running

def _plain(x):
    """Convert numpy scalars and tuples into JSON-native values."""
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return [_plain(v) for v in x.tolist()]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return float(x)
    return x


def _normalize(rec: VerificationRecord) -> VerificationRecord:
    f = lambda v: None if v is None else float(v)
    return VerificationRecord(rec.statement, _plain(rec.params), f(rec.lhs), f(rec.rhs), f(rec.margin),
                              rec.status, float(rec.runtime_ms))


def sort_key(rec: VerificationRecord):
    return (rec.statement, json.dumps(rec.params, sort_keys=True, default=str))


def _timed(task):
    t0 = time.perf_counter()
    recs = execute(task)
    ms = (time.perf_counter() - t0) * 1000 / max(1, len(recs))
    for r in recs:
        r.runtime_ms = ms
    return recs


def run_records(cfg: SweepConfig) -> list[VerificationRecord]:
    cfg.validate()
    tasks = []
    for sid in cfg.statements:
        st = STATEMENTS[sid]
        tasks.extend((sid, t) for t in st.tasks(cfg.params_for(sid), cfg.seed))
    fn = _timed if cfg.timing else execute
    if cfg.workers == 1:
        chunks = [fn(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            chunks = list(pool.map(fn, tasks))
    records = [_normalize(r) for chunk in chunks for r in chunk]
    records.sort(key=sort_key)
    return records


def run_sweep(cfg: SweepConfig) -> tuple[Summary, list[VerificationRecord]]:
    """Run every selected statement, persist the records if an output path is set."""
    records = run_records(cfg)
    if cfg.out:
        write_report(records, cfg.out, cfg.format)
    return Summary.of(records), records


def exit_code(summary: Summary) -> int:
    return 1 if summary.failed else 0


# ---------------------------------------------------------------------------
# emission

def _num(x) -> str:
    if x is None:
        return ""
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return "%.17g" % x


def _json_value(x) -> str:
    if x is None:
        return "null"
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        if math.isnan(x):
            return "NaN"
        if math.isinf(x):
            return "Infinity" if x > 0 else "-Infinity"
        s = "%.17g" % x
        # keep floats recognisable as floats when read back
        return s if any(c in s for c in ".en") else s + ".0"
    if isinstance(x, str):
        return json.dumps(x)
    if isinstance(x, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_json_value(v)}" for k, v in sorted(x.items())) + "}"
    if isinstance(x, (list, tuple)):
        return "[" + ", ".join(_json_value(v) for v in x) + "]"
    raise TypeError(f"cannot serialize {type(x).__name__}")


def record_dict(rec: VerificationRecord) -> dict:
    return {"statement": rec.statement, "params": rec.params, "lhs": rec.lhs, "rhs": rec.rhs,
            "margin": rec.margin, "status": rec.status, "runtime_ms": rec.runtime_ms}


def emit_report(records, fmt: str = "csv") -> str:
    """Records as CSV or JSON text, in the stable sort order."""
    if fmt not in FORMATS:
        raise ConfigError(f"format must be one of {FORMATS}")
    records = sorted((_normalize(r) for r in records), key=sort_key)
    if fmt == "json":
        return "[\n" + ",\n".join("  " + _json_value(record_dict(r)) for r in records) + ("\n" if records else "") + "]\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in records:
        w.writerow([r.statement, _json_value(r.params), _num(r.lhs), _num(r.rhs), _num(r.margin),
                    r.status, _num(r.runtime_ms)])
    return buf.getvalue()


def write_report(records, path: str, fmt: str = "csv") -> None:
    """Write via a '.partial' file that is renamed only once complete."""
    text = emit_report(records, fmt)
    tmp = path + ".partial"
    with open(tmp, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _float_or_none(s: str):
    return None if s == "" else float(s)


def parse_report(text: str, fmt: str) -> list[VerificationRecord]:
    if fmt == "json":
        return [VerificationRecord(**d) for d in json.loads(text)]
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0] != CSV_HEADER:
        raise ConfigError("not a record CSV (header mismatch)")
    out = []
    for row in rows[1:]:
        st, params, lhs, rhs, margin, status, ms = row
        if status not in STATUSES:
            raise ConfigError(f"unknown status {status!r}")
        out.append(VerificationRecord(st, json.loads(params), _float_or_none(lhs), _float_or_none(rhs),
                                      _float_or_none(margin), status, float(ms)))
    return out


def load_report(path: str) -> list[VerificationRecord]:
    fmt = "json" if path.endswith(".json") else "csv"
    with open(path) as fh:
        return parse_report(fh.read(), fmt)


def summary_lines(summary: Summary) -> list[str]:
    return [f"{k}: {v}" for k, v in summary.counts.items()] + [f"total: {summary.total}"]
