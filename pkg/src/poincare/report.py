"""Tabular scan results and their CSV/JSON forms."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

COLUMNS = ("value", "target", "abs_err", "err_estimate", "seconds")


def fmt(x) -> str:
    """Numbers with 12 significant digits; integers stay integers."""
    if isinstance(x, bool):
        return str(int(x))
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        if math.isnan(x) or math.isinf(x):
            return repr(x)
        return f"{x:.12g}"
    return str(x)


@dataclass
class ScanRow:
    params: tuple
    value: float
    target: float
    err_estimate: float
    seconds: float = 0.0

    @property
    def abs_err(self) -> float:
        return abs(self.value - self.target)


@dataclass
class ScanReport:
    param_names: tuple
    rows: list = field(default_factory=list)

    def add(self, params, value, target, err_estimate, seconds=0.0) -> ScanRow:
        row = ScanRow(tuple(params), float(value), float(target), float(err_estimate), float(seconds))
        self.rows.append(row)
        return row

    @property
    def header(self) -> list[str]:
        return list(self.param_names) + list(COLUMNS)

    def records(self) -> list[dict]:
        out = []
        for r in self.rows:
            rec = dict(zip(self.param_names, r.params))
            rec.update(value=r.value, target=r.target, abs_err=r.abs_err,
                       err_estimate=r.err_estimate, seconds=r.seconds)
            out.append(rec)
        return out

    def to_csv(self, timing: bool = True) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        header = self.header if timing else self.header[:-1]
        w.writerow(header)
        for rec in self.records():
            w.writerow([fmt(rec[h]) for h in header])
        return buf.getvalue()

    def to_json(self, timing: bool = True) -> str:
        recs = []
        for rec in self.records():
            if not timing:
                rec.pop("seconds")
            recs.append({k: _json_num(v) for k, v in rec.items()})
        return json.dumps({"columns": self.header if timing else self.header[:-1],
                           "rows": recs}, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "ScanReport":
        data = json.loads(text)
        names = tuple(c for c in data["columns"] if c not in COLUMNS)
        rep = cls(names)
        for rec in data["rows"]:
            rep.add([rec[n] for n in names], rec["value"], rec["target"],
                    rec["err_estimate"], rec.get("seconds", 0.0))
        return rep


def _json_num(v):
    # round-trip through the 12-digit text form so JSON and CSV agree
    if isinstance(v, float):
        return float(fmt(v))
    return v
