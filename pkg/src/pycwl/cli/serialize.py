"""JSON and CSV emission.

Enclosures become {"lo", "hi"} decimal strings with outward rounding, exact
rationals become "p/q" strings. Key order is fixed by construction so the
same payload always serializes to the same bytes.
"""
from __future__ import annotations

import csv
import io
import json
import sys
from dataclasses import fields, is_dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from pycwl.dispatch import dispatch
from pycwl.numtheory.certified import CertifiedValue

DIGITS = 17


@dispatch
def to_plain(value: Any) -> Any:
    """Convert a result object into JSON-safe builtins. """
    if is_dataclass(value) and not isinstance(value, type):
        return {f.name: to_plain(getattr(value, f.name)) for f in fields(value)}
    return value


@to_plain.register(CertifiedValue)
def _(value: CertifiedValue) -> Dict[str, str]:
    lo, hi = value.decimal(DIGITS)
    return {'lo': lo, 'hi': hi}


@to_plain.register(Fraction)
def _(value: Fraction) -> str:
    return str(value)


@to_plain.register(bool)
def _(value: bool) -> bool:
    return value


@to_plain.register(int)
def _(value: int) -> Any:
    # beyond 2^53 a JSON reader may silently round
    return value if abs(value) < 2**53 else str(value)


@to_plain.register(float)
def _(value: float) -> Any:
    return value if np.isfinite(value) else str(value)


@to_plain.register(np.integer)
def _(value: np.integer) -> Any:
    return to_plain(int(value))


@to_plain.register(np.floating)
def _(value: np.floating) -> Any:
    return to_plain(float(value))


@to_plain.register(dict)
def _(value: dict) -> Dict[str, Any]:
    return {str(k): to_plain(v) for k, v in value.items()}


@to_plain.register(list)
def _(value: list) -> List[Any]:
    return [to_plain(v) for v in value]


@to_plain.register(tuple)
def _(value: tuple) -> List[Any]:
    return [to_plain(v) for v in value]


@to_plain.register(frozenset)
def _(value: frozenset) -> List[Any]:
    return [to_plain(v) for v in sorted(value)]


def dumps_json(payload: Any) -> str:
    return json.dumps(to_plain(payload), indent=2, ensure_ascii=False) + "\n"


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    plain = to_plain(value)
    if isinstance(plain, (dict, list)):
        return json.dumps(plain, ensure_ascii=False)
    return str(plain)


def dumps_csv(columns: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(value) for value in row])
    return buffer.getvalue()


def write_text(text: str, out: Optional[str]) -> None:
    """Write to `out`, or stdout when no path is given. """
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(out, "w", encoding="utf-8", newline="") as f:
        f.write(text)


def rounded_percent(value: CertifiedValue, exact_zero: Optional[str]) -> str:
    """Percentage rounded to two decimals, or a dash for a structural zero. """
    if exact_zero is not None:
        return "—"
    return f"{100 * value.mid:.2f}"


__all__ = [
    'to_plain',
    'dumps_json',
    'dumps_csv',
    'write_text',
    'rounded_percent',
]
