"""Self-describing JSON files for matrix tuples.

A tuple file looks like

    {
      "dimension": 2,
      "symbols": 2,
      "scalar_policy": "exact-rational",
      "label": "notmix2",
      "matrices": [[["0", "2"], ["1", "0"]],
                   [["0", "1"], ["2", "0"]]]
    }

Entries may be rational strings ("p/q"), integers, or decimals; each
matrix may be given as nested rows or as one flat row-major array.
Decimal entries force the double-precision policy, and declaring
exact-rational alongside decimal entries is a format error: exactness
is always opt-in explicit.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction

from .core import DOUBLE, EXACT, MatrixTuple, make_tuple
from .errors import TupleFormatError

FORMAT_KEYS = {"dimension", "symbols", "matrices", "scalar_policy", "label"}


def _parse_entry(raw, where):
    """Classify one scalar entry; returns (value, is_exact)."""
    if isinstance(raw, bool):
        raise TupleFormatError("%s: boolean is not a matrix entry" % where)
    if isinstance(raw, int):
        return Fraction(raw), True
    if isinstance(raw, float):
        return raw, False
    if isinstance(raw, str):
        try:
            return Fraction(raw.strip()), True
        except (ValueError, ZeroDivisionError) as exc:
            raise TupleFormatError(
                "%s: bad rational string %r (%s)" % (where, raw, exc))
    raise TupleFormatError("%s: cannot read entry %r" % (where, raw))


def _matrix_entries(raw, dim, where):
    """Normalize nested-row or flat row-major input to a row list."""
    if not isinstance(raw, list) or not raw:
        raise TupleFormatError("%s: matrix must be a nonempty array" % where)
    if all(isinstance(x, list) for x in raw):
        if len(raw) != dim or any(len(row) != dim for row in raw):
            raise TupleFormatError(
                "%s: expected %d rows of %d entries" % (where, dim, dim))
        return raw
    if any(isinstance(x, list) for x in raw):
        raise TupleFormatError("%s: mix of rows and scalars" % where)
    if len(raw) != dim * dim:
        raise TupleFormatError(
            "%s: flat matrix needs %d entries, got %d"
            % (where, dim * dim, len(raw)))
    return [raw[i * dim:(i + 1) * dim] for i in range(dim)]


def parse_tuple_data(data) -> MatrixTuple:
    """Build a MatrixTuple from decoded JSON data."""
    if not isinstance(data, dict):
        raise TupleFormatError("tuple file must contain a JSON object")
    unknown = set(data) - FORMAT_KEYS
    if unknown:
        raise TupleFormatError("unknown keys: %s" % ", ".join(sorted(unknown)))
    for key in ("dimension", "symbols", "matrices"):
        if key not in data:
            raise TupleFormatError("missing required key %r" % key)
    dim = data["dimension"]
    size = data["symbols"]
    if not isinstance(dim, int) or dim < 1:
        raise TupleFormatError("dimension must be a positive integer")
    if not isinstance(size, int) or size < 2:
        raise TupleFormatError("symbols must be an integer >= 2")
    raw_matrices = data["matrices"]
    if not isinstance(raw_matrices, list) or len(raw_matrices) != size:
        raise TupleFormatError(
            "matrices must be an array of %d matrices" % size)
    declared = data.get("scalar_policy")
    if declared is not None and declared not in (EXACT, DOUBLE):
        raise TupleFormatError(
            "scalar_policy must be %r or %r" % (EXACT, DOUBLE))
    label = data.get("label")
    if label is not None and not isinstance(label, str):
        raise TupleFormatError("label must be a string")

    parsed = []
    all_exact = True
    for k, raw in enumerate(raw_matrices):
        where = "matrix %d" % (k + 1)
        rows = _matrix_entries(raw, dim, where)
        out_rows = []
        for i, row in enumerate(rows):
            out_row = []
            for j, raw_entry in enumerate(row):
                value, is_exact = _parse_entry(
                    raw_entry, "%s entry (%d,%d)" % (where, i + 1, j + 1))
                all_exact = all_exact and is_exact
                out_row.append(value)
            out_rows.append(out_row)
        parsed.append(out_rows)

    if declared == EXACT and not all_exact:
        raise TupleFormatError(
            "scalar_policy declares exact-rational but decimal entries "
            "are present; use \"p/q\" strings or integers")
    policy = declared or (EXACT if all_exact else DOUBLE)
    if policy == DOUBLE:
        parsed = [[[float(x) for x in row] for row in mat] for mat in parsed]
    return make_tuple(parsed, policy=policy, label=label)


def load_tuple(path) -> MatrixTuple:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise TupleFormatError("cannot read %s: %s" % (path, exc))
    except json.JSONDecodeError as exc:
        raise TupleFormatError(
            "%s: invalid JSON at line %d column %d: %s"
            % (path, exc.lineno, exc.colno, exc.msg))
    return parse_tuple_data(data)


def tuple_data(t: MatrixTuple):
    """Canonical JSON-ready dict for a tuple."""
    matrices = []
    for m in t.matrices:
        if t.policy == EXACT:
            matrices.append([[str(Fraction(x)) for x in row] for row in m])
        else:
            matrices.append([[float(x) for x in row] for row in m])
    data = {"dimension": t.dim, "symbols": t.size,
            "scalar_policy": t.policy, "matrices": matrices}
    if t.label:
        data["label"] = t.label
    return data


def save_tuple(t: MatrixTuple, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(tuple_data(t), fh, indent=2, sort_keys=True)
        fh.write("\n")


def tuple_digest(t: MatrixTuple) -> str:
    """sha256 of the canonical serialized form, for report provenance."""
    canonical = json.dumps(tuple_data(t), sort_keys=True,
                           separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def parse_word(text) -> tuple:
    """Parse a cylinder word like "1,2,1" (empty string: empty word)."""
    text = text.strip()
    if not text:
        return ()
    try:
        symbols = tuple(int(piece.strip()) for piece in text.split(","))
    except ValueError:
        raise TupleFormatError("bad word %r; use comma-separated symbols" % text)
    if any(s < 1 for s in symbols):
        raise TupleFormatError("word symbols are 1-based, got %r" % (symbols,))
    return symbols
