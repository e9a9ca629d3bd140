"""Serializing breakdowns and reports to JSON, CSV and plain text, and back.

Binary floats are written in scientific notation with enough significant
digits to round-trip at their precision; exact rationals are written as
``"p/q"`` strings.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import math
from fractions import Fraction

import gmpy2
from gmpy2 import mpfr

from .almost_prime import Mode
from .constants import ConstantBreakdown
from .empirics import CountReport

_MPFR_FIELDS = {"euler_product", "tail_bound", "C", "predicted_C"}
_FRACTION_FIELDS = {"H2", "V", "expected"}
_INT_FIELDS = {"ell", "a", "h", "x", "gpr_count", "stratum_count", "truncation_prime", "precision_bits", "hits", "trials"}


def digits_for(precision_bits: int) -> int:
    """Significant decimal digits that make an mpfr of this precision round-trip."""
    return math.ceil(precision_bits * math.log10(2)) + 1


def format_mpfr(x, precision_bits: int | None = None) -> str:
    if isinstance(x, float):
        return repr(x)
    bits = precision_bits or x.precision
    if x == 0 or not gmpy2.is_finite(x):
        return str(float(x))
    # digits() gives 0.MMMM x 10^exp; str.format on mpfr is unreliable here
    mant, exp, _ = gmpy2.digits(x, 10, digits_for(bits))
    sign = "-" if mant.startswith("-") else ""
    mant = mant.lstrip("-")
    return f"{sign}{mant[0]}.{mant[1:]}e{exp - 1:+d}"


def _encode(name, value, precision_bits):
    if value is None:
        return None
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, Mode):
        return value.value
    if type(value).__name__ == "mpfr" or (isinstance(value, float) and name in _MPFR_FIELDS):
        return format_mpfr(value, precision_bits)
    return value


def to_record(obj) -> dict:
    """Flat dict of strings and ints, tagged with the record kind."""
    fields = dataclasses.asdict(obj) if dataclasses.is_dataclass(obj) else dict(obj)
    prec = fields.get("precision_bits")
    rec = {"kind": type(obj).__name__}
    for name, value in fields.items():
        rec[name] = _encode(name, value, prec)
    if isinstance(obj, CountReport):
        rec["ratio_observed"] = repr(obj.ratio_observed)
    return rec


def _decode(name, value, precision_bits):
    if value is None or value == "":
        return None
    if name in _MPFR_FIELDS:
        with gmpy2.context(precision=precision_bits or 53):
            return mpfr(value)
    if name in _FRACTION_FIELDS:
        return Fraction(value)
    if name in _INT_FIELDS:
        return int(value)
    if name == "mode":
        return Mode(value)
    if name in ("landau", "ratio_observed"):
        return float(value)
    return value


def from_record(rec: dict):
    kind = rec.get("kind")
    prec = int(rec["precision_bits"]) if rec.get("precision_bits") not in (None, "") else None
    values = {k: _decode(k, v, prec) for k, v in rec.items() if k != "kind"}
    if kind == "ConstantBreakdown":
        return ConstantBreakdown(**values)
    if kind == "CountReport":
        values.pop("ratio_observed", None)
        return CountReport(**values)
    return values


def dumps_json(obj) -> str:
    if isinstance(obj, list):
        return json.dumps([to_record(o) for o in obj], indent=2)
    return json.dumps(to_record(obj), indent=2)


def loads_json(text: str):
    data = json.loads(text)
    if isinstance(data, list):
        return [from_record(r) for r in data]
    return from_record(data)


def dumps_csv(records: list[dict]) -> str:
    buf = io.StringIO()
    names = list(dict.fromkeys(k for r in records for k in r))
    writer = csv.DictWriter(buf, fieldnames=names, lineterminator="\n")
    writer.writeheader()
    for r in records:
        writer.writerow({k: ("" if v is None else v) for k, v in r.items()})
    return buf.getvalue()


def loads_csv(text: str) -> list[dict]:
    return [dict(row) for row in csv.DictReader(io.StringIO(text))]


def human(records: list[dict]) -> str:
    if len(records) == 1:
        rec = records[0]
        width = max(len(k) for k in rec)
        return "\n".join(f"{k:<{width}}  {v}" for k, v in rec.items()) + "\n"
    names = list(dict.fromkeys(k for r in records for k in r))
    rows = [[str(r.get(k, "")) for k in names] for r in records]
    widths = [max(len(n), *(len(row[i]) for row in rows)) for i, n in enumerate(names)]
    lines = ["  ".join(n.ljust(w) for n, w in zip(names, widths))]
    lines += ["  ".join(c.ljust(w) for c, w in zip(row, widths)) for row in rows]
    return "\n".join(lines) + "\n"
