"""Run reports and machine-readable output files.

Every CLI run writes a report.json describing what was computed, from
which input, with which parameters, and how long it took.  Reports are
deterministic for a fixed input and parameter set: no timestamps inside
the payload, keys sorted, floats emitted with repr round-trip fidelity.
Timing lives in a separate key so two runs differ only there.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

SERIES_COLUMNS = ["n", "upper", "periodic_lower", "spectral_diagnostic"]
CYLINDER_COLUMNS = ["n", "word", "measure"]
ENTROPY_COLUMNS = ["n", "block_entropy", "per_symbol_entropy",
                   "conditional_entropy", "variational_gap", "lyapunov_top"]
CORRELATION_COLUMNS = ["gap", "correlation", "product_of_measures",
                       "difference"]
ACCEPTANCE_COLUMNS = ["criterion", "status", "seconds", "detail"]


def jsonable(value):
    """Recursively convert package values to JSON-encodable data.

    Fractions become "p/q" strings (exactness survives the file),
    complex numbers become {"re": ..., "im": ...}, and non-finite
    floats become None since JSON has no spelling for them.
    """
    if value is None or isinstance(value, (bool, int, str)):
        return value
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, float):
        return value if math.isfinite(value) else None
    if isinstance(value, complex):
        return {"re": jsonable(value.real), "im": jsonable(value.imag)}
    if isinstance(value, np.generic):
        return jsonable(value.item())
    if isinstance(value, np.ndarray):
        return [jsonable(x) for x in value.tolist()]
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = sorted(value) if isinstance(value, (set, frozenset)) else value
        return [jsonable(x) for x in items]
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return {f.name: jsonable(getattr(value, f.name))
                for f in dataclasses.fields(value)}
    return str(value)


@dataclass
class RunReport:
    """Provenance and results for one CLI invocation."""

    operation: str
    input_label: str
    input_digest: str
    parameters: dict = field(default_factory=dict)
    results: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)
    budgets: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)
    tool_version: str = ""

    def payload(self):
        return {
            "operation": self.operation,
            "input": {"label": self.input_label,
                      "digest": self.input_digest},
            "parameters": jsonable(self.parameters),
            "results": jsonable(self.results),
            "witnesses": jsonable(self.witnesses),
            "budgets": jsonable(self.budgets),
            "timings": jsonable(self.timings),
            "tool_version": self.tool_version,
        }


def write_report(report: RunReport, path):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        json.dump(report.payload(), fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_csv(path, fieldnames, rows):
    """RFC 4180 CSV with LF line endings."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fieldnames,
                                lineterminator="\n")
        writer.writeheader()
        for row in rows:
            out = {}
            for name in fieldnames:
                v = row.get(name)
                if isinstance(v, float) and not math.isfinite(v):
                    v = ""
                elif v is None:
                    v = ""
                out[name] = v
            writer.writerow(out)
