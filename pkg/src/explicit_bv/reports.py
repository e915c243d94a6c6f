"""One row per checked inequality instance, plus CSV/JSON writers.

CSV columns are fixed (see ``COLUMNS``); parameters that do not apply to a
row are left empty.  Wall-time is recorded in ``cost`` but only serialized
when asked for, so repeated runs produce byte-identical files.
"""

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

PARAM_COLUMNS = ("x", "Q", "Q1", "q", "a", "U", "V", "theta", "T", "b", "n")
COLUMNS = ("ineq",) + PARAM_COLUMNS + ("lhs", "rhs", "margin", "rhs_lower", "margin_lower", "holds", "note")


@dataclass
class BoundCheckReport:
    ineq: str
    params: dict
    lhs: float
    rhs: float
    rhs_lower: float | None = None
    strict: bool = True
    note: str = ""
    cost: float = 0.0
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        self.lhs = float(self.lhs)
        self.rhs = float(self.rhs)
        if self.rhs_lower is not None:
            self.rhs_lower = float(self.rhs_lower)
        self.params = {k: v.item() if isinstance(v, np.generic) else v for k, v in self.params.items()}

    @property
    def margin(self):
        return self.rhs - self.lhs

    @property
    def margin_lower(self):
        return None if self.rhs_lower is None else self.lhs - self.rhs_lower

    @property
    def holds(self):
        def ok(m):
            if math.isnan(m):
                return False
            return m > 0 if self.strict else m >= 0

        if not ok(self.margin):
            return False
        return self.rhs_lower is None or ok(self.margin_lower)

    @property
    def min_margin(self):
        m = self.margin
        return m if self.margin_lower is None else min(m, self.margin_lower)

    def row(self, timing=False):
        out = {"ineq": self.ineq}
        for k in PARAM_COLUMNS:
            out[k] = self.params.get(k)
        out.update(lhs=self.lhs, rhs=self.rhs, margin=self.margin, rhs_lower=self.rhs_lower,
                   margin_lower=self.margin_lower, holds=self.holds, note=self.note)
        if timing:
            out["cost"] = self.cost
        return out


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def reports_to_csv(reports, timing=False):
    buf = io.StringIO()
    cols = COLUMNS + (("cost",) if timing else ())
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in reports:
        row = r.row(timing)
        w.writerow([_fmt(row.get(c)) for c in cols])
    return buf.getvalue()


def _json_safe(v):
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    return v


def reports_to_json(reports, meta=None, timing=False):
    rows = [{k: _json_safe(v) for k, v in r.row(timing).items()} for r in reports]
    return json.dumps({"run": meta or {}, "rows": rows, "summary": summarize(reports)},
                      indent=2, sort_keys=True)


def summarize(reports):
    reports = list(reports)
    failing = [r for r in reports if not r.holds]
    margins = [r.min_margin for r in reports]
    return {
        "count": len(reports),
        "failures": len(failing),
        "all_hold": not failing,
        "min_margin": min(margins) if margins else None,
    }
