"""Batch classification of complex libraries into a fixed-column CSV."""

from __future__ import annotations

import csv
import io
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .classify import classify
from .complexes import SimplicialComplex
from .errors import ZKError
from .linalg import CoefficientSpec

BOOL_COLUMNS = [
    "is_flag", "is_neighbourly", "is_cone", "is_CM", "is_sequentially_CM_dual", "is_gorenstein_star",
    "has_linear_resolution", "has_almost_linear_resolution", "is_componentwise_linear", "is_CAL",
    "is_quasi_koszul", "is_AQK", "deletion_criterion",
]
COLUMNS = (["name", "m", "dim", "fields", "f_vector"] + BOOL_COLUMNS
           + ["gl_index", "projdim_ideal", "regularity", "connected_sum_pairs", "genus", "error"])
SUMMARY_KEYS = ["total", "gorenstein_star", "aqk", "aqk_neighbourly", "neighbourly", "cone", "quasi_koszul",
                "linear", "almost_linear", "cal", "errors"]


@dataclass
class SurveyRow:
    values: dict
    seconds: float = 0.0

    def get(self, key):
        return self.values.get(key)


@dataclass
class SurveyResult:
    rows: list = field(default_factory=list)
    parse_failures: list = field(default_factory=list)  # (source, message)

    @property
    def ok(self) -> bool:
        return not self.parse_failures and not any(r.get("error") for r in self.rows)

    def summary(self) -> dict:
        s = dict.fromkeys(SUMMARY_KEYS, 0)
        for r in self.rows:
            s["total"] += 1
            if r.get("error"):
                s["errors"] += 1
                continue
            s["gorenstein_star"] += r.get("is_gorenstein_star") is True
            s["aqk"] += r.get("is_AQK") is True
            s["aqk_neighbourly"] += r.get("is_AQK") is True and r.get("is_neighbourly") is True
            s["neighbourly"] += r.get("is_neighbourly") is True
            s["cone"] += r.get("is_cone") is True
            s["quasi_koszul"] += r.get("is_quasi_koszul") is True
            s["linear"] += r.get("has_linear_resolution") is True
            s["almost_linear"] += r.get("has_almost_linear_resolution") is True
            s["cal"] += r.get("is_CAL") is True
        s["parse_failures"] = len(self.parse_failures)
        return s

    def to_csv(self, timing: bool = False) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(COLUMNS + (["seconds"] if timing else []))
        for r in self.rows:
            line = [_csv_cell(r.get(c)) for c in COLUMNS]
            if timing:
                line.append(f"{r.seconds:.3f}")
            w.writerow(line)
        return buf.getvalue()


def _csv_cell(v):
    if v is None:
        return ""
    if v is True:
        return "1"
    if v is False:
        return "0"
    if isinstance(v, (list, dict)):
        return json.dumps(v, separators=(",", ":"))
    if isinstance(v, float) and v == math.inf:
        return "inf"
    return str(v)


def _aggregate(results: list) -> dict:
    """Combine per-coefficient results: booleans by AND, numerics by the worst case."""
    out = {}
    for c in BOOL_COLUMNS:
        vals = [getattr(r, c) for r in results]
        out[c] = None if any(v is None for v in vals) else all(vals)
    idx = [r.gl_index for r in results]
    if any(isinstance(x, str) for x in idx):
        out["gl_index"] = next(x for x in idx if isinstance(x, str))
    elif any(x is None for x in idx):
        out["gl_index"] = None
    else:
        out["gl_index"] = min(idx)
    out["projdim_ideal"] = max(r.projdim_ideal for r in results)
    regs = [r.regularity for r in results if r.regularity is not None]
    out["regularity"] = max(regs) if regs else None
    return out


def survey_one(item) -> SurveyRow:
    name, K, labels, componentwise, max_m = item
    coeffs = [CoefficientSpec.parse(c) for c in labels]
    t0 = time.perf_counter()
    row = {"name": name, "m": K.m, "dim": K.dim, "fields": ";".join(labels), "f_vector": list(K.f_vector)}
    try:
        rep = classify(K, coeffs, componentwise=componentwise, max_m=max_m)
        row.update(_aggregate(list(rep.results.values())))
        pairs = [d for d in rep.derived if d.name == "rational_connected_sum"]
        if pairs and row["is_AQK"] and row["is_gorenstein_star"]:
            row["connected_sum_pairs"] = pairs[0].value["pairs"]
            row["genus"] = pairs[0].value["g"]
    except ZKError as e:
        row["error"] = f"{type(e).__name__}: {e}"
    return SurveyRow(row, time.perf_counter() - t0)


def survey(records: list[tuple[str, SimplicialComplex]], coeffs=("0",), jobs: int = 1,
           componentwise: bool = False, max_m: int | None = None) -> SurveyResult:
    """Classify every record; rows come back in input order whatever ``jobs`` is."""
    labels = [c.label if isinstance(c, CoefficientSpec) else CoefficientSpec.parse(c).label for c in coeffs] or ["0"]
    items = [(name, K, labels, componentwise, max_m) for name, K in records]
    if jobs <= 1 or len(items) <= 1:
        rows = [survey_one(it) for it in items]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            rows = list(ex.map(survey_one, items, chunksize=max(1, len(items) // (8 * jobs))))
    return SurveyResult(rows)


def format_summary(summary: dict) -> str:
    return "\n".join(f"{k}: {v}" for k, v in summary.items()) + "\n"
