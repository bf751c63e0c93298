"""CSV readers and deterministic CSV writers.

All numbers are written with 15 significant digits, dates as ISO-8601 and
lines end in ``\\n`` so repeated runs are byte-identical.
"""

from __future__ import annotations

import csv
import math
from datetime import date
from pathlib import Path
from typing import Iterable, Sequence

from .bootstrap import KINDS, Quote, QuoteSet
from .credit_xva import CreditCurve
from .curves import DiscountCurve, zero_rate
from .errors import InputError
from .instruments import (
    EURIBOR_6M,
    IRS_6M_CONVENTIONS,
    OIS_CONVENTIONS,
    FixingTable,
    SwapSpec,
    make_swap,
)
from .timegrid import parse_date

QUOTE_COLUMNS = ("asof", "kind", "tenor_months", "rate")
TRADE_COLUMNS = ("trade_id", "type", "start", "end", "fixed_rate", "notional", "payer", "underlying", "collateral")
CREDIT_COLUMNS = ("pillar_date", "hazard_rate")
FIXING_COLUMNS = ("date", "rate")
CURVE_COLUMNS = ("pillar_date", "discount_factor", "zero_rate_act365f")


class FileFormatError(InputError):
    pass


def fmt(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if value == 0.0:
            return "0"
        return format(value, ".15g")
    if isinstance(value, date):
        return value.isoformat()
    return str(value)


def write_csv(path: str | Path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [",".join(header)]
    lines.extend(",".join(fmt(v) for v in row) for row in rows)
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


def _rows(path, columns: Sequence[str]):
    """Yield ``(line_number, row_dict)``; header must contain ``columns``."""
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise FileFormatError(f"{path}: cannot open ({exc.strerror})") from exc
    with fh:
        reader = csv.DictReader(fh)
        header = [h.strip() for h in (reader.fieldnames or [])]
        missing = [c for c in columns if c not in header]
        if missing:
            raise FileFormatError(f"{path}:1: missing columns {', '.join(missing)}")
        reader.fieldnames = header
        for row in reader:
            if not any((v or "").strip() for v in row.values()):
                continue
            yield reader.line_num, {k: (v or "").strip() for k, v in row.items()}


def _float(path, line: int, name: str, text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise FileFormatError(f"{path}:{line}: {name} {text!r} is not a number") from None
    if not math.isfinite(value):
        raise FileFormatError(f"{path}:{line}: {name} must be finite")
    return value


def _date(path, line: int, name: str, text: str) -> date:
    try:
        return parse_date(text)
    except ValueError:
        raise FileFormatError(f"{path}:{line}: {name} {text!r} is not a YYYY-MM-DD date") from None


def read_quotes(path, kind: str | None = None) -> QuoteSet:
    """Quote file ``asof,kind,tenor_months,rate``; optionally keep one kind."""
    quotes = []
    for line, row in _rows(path, QUOTE_COLUMNS):
        if row["kind"] not in KINDS:
            raise FileFormatError(f"{path}:{line}: unknown kind {row['kind']!r}")
        try:
            tenor = int(row["tenor_months"])
        except ValueError:
            raise FileFormatError(f"{path}:{line}: tenor_months {row['tenor_months']!r} is not an integer") from None
        try:
            q = Quote(
                row["kind"],
                tenor,
                _float(path, line, "rate", row["rate"]),
                _date(path, line, "asof", row["asof"]),
            )
        except FileFormatError:
            raise
        except InputError as exc:
            raise FileFormatError(f"{path}:{line}: {exc}") from None
        if kind is None or q.kind == kind:
            quotes.append(q)
    if not quotes:
        raise FileFormatError(f"{path}: no quotes" + (f" of kind {kind}" if kind else ""))
    try:
        return QuoteSet(quotes[0].asof, tuple(quotes))
    except InputError as exc:
        raise FileFormatError(f"{path}: {exc}") from None


def write_quotes(path, quotes: QuoteSet) -> Path:
    return write_csv(path, QUOTE_COLUMNS, ((q.asof, q.kind, q.tenor_months, q.rate) for q in quotes))


def read_trades(path) -> list[tuple[str, SwapSpec]]:
    trades = []
    for line, row in _rows(path, TRADE_COLUMNS):
        kind = row["type"].upper()
        if kind not in ("OIS", "IRS"):
            raise FileFormatError(f"{path}:{line}: type must be OIS or IRS, got {row['type']!r}")
        payer = {"P": 1, "R": -1}.get(row["payer"].upper())
        if payer is None:
            raise FileFormatError(f"{path}:{line}: payer must be P or R")
        conventions = OIS_CONVENTIONS if kind == "OIS" else IRS_6M_CONVENTIONS
        underlying = row["underlying"] or ("ON-EONIA" if kind == "OIS" else EURIBOR_6M)
        try:
            spec = make_swap(
                _date(path, line, "start", row["start"]),
                _date(path, line, "end", row["end"]),
                conventions,
                _float(path, line, "fixed_rate", row["fixed_rate"]),
                _float(path, line, "notional", row["notional"]),
                payer,
                underlying,
                row["collateral"] or "EON",
            )
        except FileFormatError:
            raise
        except (InputError, ValueError) as exc:
            raise FileFormatError(f"{path}:{line}: {exc}") from None
        trades.append((row["trade_id"], spec))
    return trades


def read_fixings(path) -> FixingTable:
    rates = {}
    for line, row in _rows(path, FIXING_COLUMNS):
        d = _date(path, line, "date", row["date"])
        if d in rates:
            raise FileFormatError(f"{path}:{line}: duplicate fixing date {d.isoformat()}")
        rates[d] = _float(path, line, "rate", row["rate"])
    try:
        return FixingTable(rates)
    except InputError as exc:
        raise FileFormatError(f"{path}: {exc}") from None


def read_credit_curve(path, anchor: date, recovery: float) -> CreditCurve:
    dates, hazards = [], []
    for line, row in _rows(path, CREDIT_COLUMNS):
        dates.append(_date(path, line, "pillar_date", row["pillar_date"]))
        hazards.append(_float(path, line, "hazard_rate", row["hazard_rate"]))
    if not dates:
        raise FileFormatError(f"{path}: no credit pillars")
    try:
        return CreditCurve.from_dates(anchor, dates, hazards, recovery)
    except InputError as exc:
        raise FileFormatError(f"{path}: {exc}") from None


def write_curve(path, curve: DiscountCurve) -> Path:
    if not curve.pillar_dates:
        raise InputError("curve has no pillar dates to dump")
    rows = []
    for d, log_df in zip(curve.pillar_dates, curve.log_dfs):
        rows.append((d, math.exp(log_df), zero_rate(curve, d)))
    return write_csv(path, CURVE_COLUMNS, rows)
