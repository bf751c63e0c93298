"""Command-line entry point: ``rfr-transition <command> [options]``.

Every command writes CSV files into the output directory (``--out``, else
``$RFR_OUT_DIR``, else ``./out``) and prints a short summary.  Exit codes:
0 success, 2 bad input, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from datetime import date
from pathlib import Path
from typing import Sequence

from . import io
from .bootstrap import IRS_6M, OIS, bootstrap_ibor, bootstrap_ois, repricing_residuals
from .credit_xva import (
    CreditCurve,
    FundingSetup,
    fva_integral,
    fva_single_cashflow,
    risky_zcb,
    transition_invariance_check,
)
from .curves import EON, EST, ESTR_DELTA, apply_spread, curve_time, flat_curve
from .errors import InputError, NumericalError
from .instruments import FORWARD_INDEX, annuity, is_overnight, par_rate, price_swap
from .timegrid import DayCount, parse_date
from .transition import (
    BP,
    CONTINUOUS,
    DISCRETE,
    constant_forward_rates_analysis,
    constant_par_rates_analysis,
    theoretical_estr_ois_quotes,
)

EXIT_OK, EXIT_INPUT, EXIT_NUMERICAL = 0, 2, 3

SUMMARY_COLUMNS = ("quantity", "value")


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse already exits 2; keep the message terse
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _finite(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number") from None
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError("value must be finite")
    return value


def _iso_date(text: str) -> date:
    try:
        return parse_date(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a YYYY-MM-DD date") from None


def _maturity(text: str) -> date | float:
    try:
        return parse_date(text)
    except ValueError:
        pass
    return _finite(text)


def _day_count(text: str) -> DayCount:
    try:
        return DayCount.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def out_dir(args) -> Path:
    if args.out:
        return Path(args.out)
    return Path(os.environ.get("RFR_OUT_DIR") or "out")


def _check_asof(args, asof: date) -> None:
    if args.asof is not None and args.asof != asof:
        raise InputError(f"--asof {args.asof} differs from quote date {asof}")


def _load_quotes(args):
    quotes = io.read_quotes(args.quotes)
    _check_asof(args, quotes.asof)
    irs = None
    if getattr(args, "irs_quotes", None):
        irs = io.read_quotes(args.irs_quotes, IRS_6M)
        if irs.asof != quotes.asof:
            raise InputError(f"IRS quotes dated {irs.asof} but OIS quotes dated {quotes.asof}")
    elif any(q.kind == IRS_6M for q in quotes):
        irs = quotes.of_kind(IRS_6M)
    return quotes.of_kind(OIS), irs


def _years(asof: date, d: date) -> float:
    return curve_time(asof, d)


# -- commands ---------------------------------------------------------------


def cmd_bootstrap(args) -> int:
    ois, irs = _load_quotes(args)
    out = out_dir(args)
    disc = bootstrap_ois(ois, tag=args.collateral)
    io.write_curve(out / f"curve_{disc.tag}.csv", disc)
    rows = [("OIS", q.tenor_months, q.rate, pv, err) for q, pv, err in repricing_residuals(ois, disc)]
    if irs is not None:
        fwd = bootstrap_ibor(irs, disc)
        io.write_curve(out / f"curve_EURIBOR-6M_{disc.tag}.csv", fwd)
        rows += [(IRS_6M, q.tenor_months, q.rate, pv, err) for q, pv, err in repricing_residuals(irs, disc, fwd)]
    io.write_csv(out / "bootstrap_residuals.csv", ("kind", "tenor_months", "quote", "pv", "par_minus_quote"), rows)
    max_pv = max(abs(r[3]) for r in rows)
    max_err = max(abs(r[4]) for r in rows)
    print(f"bootstrapped {len(rows)} quotes; max |PV| {max_pv:.3e}, max |par - quote| {max_err:.3e}")
    return EXIT_OK


def cmd_transition_ois(args) -> int:
    ois, _ = _load_quotes(args)
    out = out_dir(args)
    estr, report = theoretical_estr_ois_quotes(ois, args.delta, args.regime)
    tag = f"ois_{args.regime}"
    io.write_csv(
        out / f"transition_{tag}.csv",
        ("tenor_months", "eonia_par", "estr_par", "par_spread_bps", "par_spread_minus_delta_bps"),
        (
            (r.tenor_months, r.eonia_par, r.estr_par, r.par_spread / BP, r.par_spread_minus_delta / BP)
            for r in report.rows
        ),
    )
    io.write_quotes(out / f"estr_quotes_{args.regime}.csv", estr)
    years = [r.tenor_months / 12.0 for r in report.rows]
    io.write_csv(out / f"series_{tag}_eonia_par.csv", ("tenor_years", "par_rate"),
                 zip(years, (r.eonia_par for r in report.rows)))
    io.write_csv(out / f"series_{tag}_estr_par.csv", ("tenor_years", "par_rate"),
                 zip(years, (r.estr_par for r in report.rows)))
    io.write_csv(out / f"series_{tag}_spread_bps.csv", ("tenor_years", "par_spread_bps"),
                 zip(years, (r.par_spread / BP for r in report.rows)))
    io.write_csv(out / f"series_{tag}_delta_bps.csv", ("tenor_years", "delta_bps"),
                 ((y, args.delta / BP) for y in years))
    io.write_csv(
        out / f"summary_{tag}.csv",
        SUMMARY_COLUMNS,
        [
            ("delta_bps", args.delta / BP),
            ("rmse_bps", report.rmse_bps),
            ("min_bps", report.min_bps),
            ("max_bps", report.max_bps),
            ("max_abs_bps", report.max_abs_bps),
        ],
    )
    print(
        f"OIS par spread minus delta ({args.regime}): RMSE {report.rmse_bps:.4f} bps, "
        f"range [{report.min_bps:.4f}, {report.max_bps:.4f}] bps"
    )
    return EXIT_OK


def cmd_transition_irs(args) -> int:
    ois, irs = _load_quotes(args)
    if irs is None:
        raise InputError("no IRS-6M quotes: pass --irs-quotes")
    out = out_dir(args)
    indirect = constant_par_rates_analysis(irs, ois, args.delta, args.horizon_months, args.estr_curve)
    direct = constant_forward_rates_analysis(irs, ois, args.delta, args.estr_curve)

    io.write_csv(
        out / "irs_constant_par_rates.csv",
        ("start", "end", "fwd_eonia", "fwd_estr", "diff_bps"),
        ((r.start, r.end, r.fwd_eonia, r.fwd_estr, r.diff_bps) for r in indirect.rows),
    )
    io.write_csv(out / "series_irs_forward_diff_bps.csv", ("start_years", "diff_bps"),
                 ((_years(indirect.asof, r.start), r.diff_bps) for r in indirect.rows))
    io.write_csv(
        out / "irs_constant_forwards.csv",
        ("tenor_months", "market_par", "estr_discounted_par", "diff_bps"),
        ((r.tenor_months, r.eonia_par, r.estr_par, r.par_spread / BP) for r in direct.rows),
    )
    io.write_csv(out / "series_irs_par_diff_bps.csv", ("tenor_years", "diff_bps"),
                 ((r.tenor_months / 12.0, r.par_spread / BP) for r in direct.rows))
    diffs = indirect.diffs_bps
    io.write_csv(
        out / "summary_irs.csv",
        SUMMARY_COLUMNS,
        [
            ("delta_bps", args.delta / BP),
            ("forward_diff_rmse_bps", indirect.rmse_bps),
            ("forward_diff_min_bps", float(diffs.min())),
            ("forward_diff_max_bps", float(diffs.max())),
            ("par_diff_rmse_bps", direct.rmse_bps),
            ("par_diff_min_bps", direct.min_bps),
            ("par_diff_max_bps", direct.max_bps),
        ],
    )
    print(
        f"constant par rates: forward diff RMSE {indirect.rmse_bps:.4f} bps, "
        f"range [{diffs.min():.4f}, {diffs.max():.4f}] bps"
    )
    print(
        f"constant forwards: par rate diff RMSE {direct.rmse_bps:.4f} bps, "
        f"range [{direct.min_bps:.4f}, {direct.max_bps:.4f}] bps"
    )
    return EXIT_OK


def _fva_discount(args):
    if args.quotes:
        ois, _ = _load_quotes(args)
        return bootstrap_ois(ois, tag=EON)
    if args.asof is None:
        raise InputError("--asof is required without --quotes")
    return flat_curve(args.asof, args.zero_rate, EON)


def cmd_fva(args) -> int:
    disc = _fva_discount(args)
    if args.credit:
        credit = io.read_credit_curve(args.credit, disc.anchor, args.recovery)
    else:
        credit = CreditCurve.flat(disc.anchor, args.hazard, args.recovery)
    setup = FundingSetup(disc, credit)
    c, T = args.cashflow, args.maturity
    if isinstance(T, float) and not T > 0.0:
        raise InputError("--maturity must be positive")
    fva = fva_single_cashflow(setup, c, T)
    fva_int = fva_integral(setup, c, T)
    t = T if isinstance(T, float) else curve_time(disc.anchor, T)
    base = float(disc.df_at(t)) * c
    inv = transition_invariance_check(setup, args.delta, c, T, args.spread_daycount, args.zero_daycount)
    rows = [
        ("base_value", base),
        ("fva", fva),
        ("fva_integral", fva_int),
        ("fair_value", base + fva),
        ("risky_bond_times_cashflow", risky_zcb(setup, T) * c),
        ("fair_value_estr", inv.v_est),
        ("transition_diff", inv.diff),
        ("funding_spread_eonia", inv.spread_eon),
        ("funding_spread_estr", inv.spread_est),
    ]
    io.write_csv(out_dir(args) / "fva_report.csv", SUMMARY_COLUMNS, rows)
    print(f"V0 {base:.12g}  FVA {fva + 0.0:.12g}  V {base + fva:.12g}  diff {inv.diff:.3e}")
    return EXIT_OK


def cmd_price(args) -> int:
    ois, irs = _load_quotes(args)
    trades = io.read_trades(args.trades)
    fixings = io.read_fixings(args.fixings) if args.fixings else None
    disc_eon = bootstrap_ois(ois, tag=EON)
    discs = {EON: disc_eon, EST: apply_spread(disc_eon, args.delta, EST)}
    ibor = {}
    rows = []
    for trade_id, spec in trades:
        if spec.collateral not in discs:
            raise InputError(f"trade {trade_id}: no curve for collateral {spec.collateral!r}")
        disc = discs[spec.collateral]
        if is_overnight(spec.underlying):
            fwd = discs[FORWARD_INDEX[spec.underlying]]
        else:
            if irs is None:
                raise InputError(f"trade {trade_id}: IRS pricing needs --irs-quotes")
            if spec.collateral not in ibor:
                ibor[spec.collateral] = bootstrap_ibor(irs, disc)
            fwd = ibor[spec.collateral]
        pv = price_swap(spec, disc, fwd, fixings)
        ann = annuity(spec, disc)
        par = par_rate(spec, disc, fwd, fixings) if ann > 0.0 else float("nan")
        kind = "OIS" if is_overnight(spec.underlying) else "IRS"
        rows.append((trade_id, kind, spec.collateral, pv, par, ann * spec.notional))
    io.write_csv(out_dir(args) / "prices.csv", ("trade_id", "type", "collateral", "pv", "par_rate", "annuity"), rows)
    for r in rows:
        print(f"{r[0]}: PV {r[3]:.6f}  par {r[4]:.8f}")
    return EXIT_OK


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rfr-transition", description="EONIA to ESTR discounting transition toolkit")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, quotes_required=True):
        p.add_argument("--asof", type=_iso_date, help="valuation date; must match the quote file")
        p.add_argument("--quotes", required=quotes_required, help="OIS quote CSV (asof,kind,tenor_months,rate)")
        p.add_argument("--out", help="output directory (default $RFR_OUT_DIR or ./out)")
        p.add_argument("--delta", type=_finite, default=ESTR_DELTA, help="ESTR minus EONIA spread (decimal)")

    p = sub.add_parser("bootstrap", help="bootstrap OIS (and EURIBOR-6M) curves")
    common(p)
    p.add_argument("--irs-quotes", help="IRS-6M quote CSV")
    p.add_argument("--collateral", choices=(EON, EST), default=EON)
    p.set_defaults(func=cmd_bootstrap)

    p = sub.add_parser("transition-ois", help="theoretical ESTR OIS par rates")
    common(p)
    p.add_argument("--regime", choices=(DISCRETE, CONTINUOUS), default=DISCRETE)
    p.set_defaults(func=cmd_transition_ois)

    p = sub.add_parser("transition-irs", help="IRS impact of the discounting switch")
    common(p)
    p.add_argument("--irs-quotes", help="IRS-6M quote CSV")
    p.add_argument("--horizon-months", type=int, default=600)
    p.add_argument("--estr-curve", choices=("spread", "quotes"), default="spread",
                   help="ESTR discounting from the shifted EONIA curve or from theoretical ESTR quotes")
    p.set_defaults(func=cmd_transition_irs)

    p = sub.add_parser("fva", help="single cash flow FVA and transition invariance")
    common(p, quotes_required=False)
    p.add_argument("--zero-rate", type=_finite, default=0.0, help="flat zero rate when no --quotes")
    p.add_argument("--hazard", type=_finite, default=0.0, help="flat hazard rate when no --credit")
    p.add_argument("--credit", help="credit curve CSV (pillar_date,hazard_rate)")
    p.add_argument("--recovery", type=_finite, default=0.4)
    p.add_argument("--cashflow", type=_finite, default=1.0)
    p.add_argument("--maturity", type=_maturity, required=True, help="years from asof or a YYYY-MM-DD date")
    p.add_argument("--spread-daycount", type=_day_count, default=DayCount.ACT_365F)
    p.add_argument("--zero-daycount", type=_day_count, default=DayCount.ACT_365F)
    p.set_defaults(func=cmd_fva)

    p = sub.add_parser("price", help="price a trade file")
    common(p)
    p.add_argument("--irs-quotes", help="IRS-6M quote CSV")
    p.add_argument("--trades", required=True, help="trade CSV")
    p.add_argument("--fixings", help="fixings CSV (date,rate) for accruing coupons")
    p.set_defaults(func=cmd_price)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (InputError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
