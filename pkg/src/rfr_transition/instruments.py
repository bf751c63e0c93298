"""OIS and IBOR swaps: annuities, leg values, prices and par rates."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from datetime import date
from typing import Mapping

import numpy as np

from .curves import EON, EST, DiscountCurve
from .errors import CollateralMismatchError, DegenerateSwapError, InputError, MissingFixingError
from .timegrid import (
    Calendar,
    DayCount,
    OvernightSubschedule,
    Schedule,
    generate_schedule,
    overnight_subschedule,
)

__all__ = [
    "FixingTable",
    "IRS_6M_CONVENTIONS",
    "OIS_CONVENTIONS",
    "SwapConventions",
    "SwapSpec",
    "annuity",
    "floating_leg_pv",
    "make_swap",
    "par_rate",
    "price_swap",
    "shift_fixings",
    "spot_compounded_rate",
]

ON_EONIA = "ON-EONIA"
ON_EST = "ON-EST"
EURIBOR_6M = "EURIBOR-6M"

#: forward-curve index each underlying must be projected from
FORWARD_INDEX = {ON_EONIA: EON, ON_EST: EST, EURIBOR_6M: EURIBOR_6M}


def is_overnight(underlying: str) -> bool:
    return underlying.startswith("ON-")


@dataclass(frozen=True)
class SwapConventions:
    fixed_frequency_months: int
    fixed_day_count: DayCount
    float_frequency_months: int
    float_day_count: DayCount = DayCount.ACT_360
    calendar: Calendar = Calendar.TARGET


OIS_CONVENTIONS = SwapConventions(12, DayCount.ACT_360, 12, DayCount.ACT_360)
IRS_6M_CONVENTIONS = SwapConventions(12, DayCount.THIRTY_E_360, 6, DayCount.ACT_360)


@dataclass(frozen=True)
class SwapSpec:
    """Fixed-vs-floating swap.  ``payer=+1`` pays fixed, ``-1`` receives fixed."""

    float_schedule: Schedule
    fixed_schedule: Schedule
    fixed_rate: float = 0.0
    notional: float = 1.0
    payer: int = 1
    underlying: str = ON_EONIA
    collateral: str = EON
    calendar: Calendar = Calendar.TARGET

    def __post_init__(self) -> None:
        if self.float_schedule.start != self.fixed_schedule.start or self.float_schedule.end != self.fixed_schedule.end:
            raise InputError("fixed and floating schedules must share start and end dates")
        if not self.notional > 0:
            raise InputError("notional must be positive")
        if self.payer not in (1, -1):
            raise InputError("payer flag must be +1 or -1")
        if self.underlying not in FORWARD_INDEX:
            raise InputError(f"unknown underlying {self.underlying!r}")

    @property
    def start(self) -> date:
        return self.float_schedule.start

    @property
    def maturity(self) -> date:
        return self.float_schedule.end

    def with_rate(self, fixed_rate: float) -> "SwapSpec":
        return replace(self, fixed_rate=fixed_rate)


def make_swap(
    start: date,
    tenor_months: int | date,
    conventions: SwapConventions,
    fixed_rate: float = 0.0,
    notional: float = 1.0,
    payer: int = 1,
    underlying: str = ON_EONIA,
    collateral: str = EON,
) -> SwapSpec:
    cal = conventions.calendar
    float_sched = generate_schedule(
        start, tenor_months, conventions.float_frequency_months, cal, conventions.float_day_count
    )
    fixed_sched = generate_schedule(
        start, tenor_months, conventions.fixed_frequency_months, cal, conventions.fixed_day_count
    )
    return SwapSpec(float_sched, fixed_sched, fixed_rate, notional, payer, underlying, collateral, cal)


@dataclass(frozen=True)
class FixingTable:
    """Realized overnight (or IBOR) fixings keyed by fixing date."""

    rates: Mapping[date, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for d, r in self.rates.items():
            if not math.isfinite(r):
                raise InputError(f"non-finite fixing on {d.isoformat()}")
            if d.weekday() >= 5:
                raise InputError(f"fixing date {d.isoformat()} is not a business day")
        object.__setattr__(self, "rates", dict(sorted(self.rates.items())))

    def __getitem__(self, d: date) -> float:
        try:
            return self.rates[d]
        except KeyError:
            raise MissingFixingError(d) from None

    def __contains__(self, d: date) -> bool:
        return d in self.rates

    def __len__(self) -> int:
        return len(self.rates)


def spot_compounded_rate(fixings: FixingTable, sub: OvernightSubschedule) -> float:
    """Realized daily-compounded rate over the coupon period of ``sub``."""
    growth = 1.0
    for d, tau in zip(sub.fixing_dates, sub.year_fractions):
        growth *= 1.0 + fixings[d] * tau
    return (growth - 1.0) / sub.accrual


def shift_fixings(fixings: FixingTable, delta: float) -> FixingTable:
    return FixingTable({d: r + delta for d, r in fixings.rates.items()})


def _check_collateral(spec: SwapSpec, disc: DiscountCurve) -> None:
    if disc.tag != spec.collateral:
        raise CollateralMismatchError(
            f"swap is collateralised {spec.collateral!r} but discount curve is tagged {disc.tag!r}"
        )


def _check_forward_source(spec: SwapSpec, fwd: DiscountCurve) -> None:
    expected = FORWARD_INDEX[spec.underlying]
    if fwd.index != expected:
        raise InputError(f"{spec.underlying} forwards need a {expected!r} curve, got {fwd.tag!r}")


def _valuation_date(disc: DiscountCurve, asof: date | None) -> date:
    if asof is None:
        return disc.anchor
    if asof != disc.anchor:
        raise InputError(f"valuation date {asof} differs from curve anchor {disc.anchor}")
    return asof


def annuity(spec: SwapSpec, disc: DiscountCurve, asof: date | None = None) -> float:
    """``sum_j P(t;S_j) tau_K`` over fixed payments on or after ``asof``."""
    _check_collateral(spec, disc)
    t = _valuation_date(disc, asof)
    sched = spec.fixed_schedule
    pay = [(d, tau) for d, tau in zip(sched.dates[1:], sched.year_fractions) if d >= t]
    if not pay:
        return 0.0
    dates, taus = zip(*pay)
    return float(np.dot(disc.dfs(dates), taus))


def _seasoned_on_rate(spec: SwapSpec, fwd: DiscountCurve, fixings: FixingTable, start: date, end: date, t: date):
    """Daily compounding with realized fixings before ``t`` and curve forwards after."""
    sub = overnight_subschedule(start, end, spec.calendar)
    growth = 1.0
    future = [k for k, d in enumerate(sub.fixing_dates) if d >= t]
    for d, tau in zip(sub.fixing_dates, sub.year_fractions):
        if d < t:
            growth *= 1.0 + fixings[d] * tau
    if future:
        first = sub.dates[future[0]]
        growth *= fwd.df(first) / fwd.df(end)
    return (growth - 1.0) / sub.accrual


def period_forwards(
    spec: SwapSpec, fwd: DiscountCurve, fixings: FixingTable | None = None, asof: date | None = None
) -> list[tuple[date, date, float, float]]:
    """``(T_{i-1}, T_i, tau_R, F_i)`` for floating coupons paid on or after ``asof``.

    Future coupons use the curve ratio ``P(T_{i-1})/P(T_i)``; for overnight
    underlyings this equals the daily compounded forward because the daily
    ratios telescope.  A coupon already accruing uses the fixing table.
    """
    _check_forward_source(spec, fwd)
    t = fwd.anchor if asof is None else asof
    fixings = fixings or FixingTable()
    out = []
    for start, end, tau in spec.float_schedule.periods():
        if end < t:
            continue
        if start >= t:
            ratio = math.exp(fwd.log_df_at(fwd.time_of(start)) - fwd.log_df_at(fwd.time_of(end)))
            f = (ratio - 1.0) / tau
        elif is_overnight(spec.underlying):
            f = _seasoned_on_rate(spec, fwd, fixings, start, end, t)
        else:
            f = fixings[start]
        out.append((start, end, tau, f))
    return out


def floating_leg_pv(
    spec: SwapSpec,
    disc: DiscountCurve,
    fwd: DiscountCurve,
    fixings: FixingTable | None = None,
    asof: date | None = None,
) -> float:
    """Per unit notional: ``sum_i P(t;T_i) F_i tau_R``."""
    _check_collateral(spec, disc)
    t = _valuation_date(disc, asof)
    rows = period_forwards(spec, fwd, fixings, t)
    if not rows:
        return 0.0
    ends = [r[1] for r in rows]
    accrued = np.array([r[2] * r[3] for r in rows])
    return float(np.dot(disc.dfs(ends), accrued))


def price_swap(
    spec: SwapSpec,
    disc: DiscountCurve,
    fwd: DiscountCurve | None = None,
    fixings: FixingTable | None = None,
    asof: date | None = None,
) -> float:
    """Swap value ``omega N [float leg - K A]`` in currency units.

    ``fwd`` defaults to ``disc`` (the single-curve OIS case).
    """
    fwd = disc if fwd is None else fwd
    flt = floating_leg_pv(spec, disc, fwd, fixings, asof)
    ann = annuity(spec, disc, asof)
    return spec.payer * spec.notional * (flt - spec.fixed_rate * ann)


def par_rate(
    spec: SwapSpec,
    disc: DiscountCurve,
    fwd: DiscountCurve | None = None,
    fixings: FixingTable | None = None,
    asof: date | None = None,
) -> float:
    fwd = disc if fwd is None else fwd
    ann = annuity(spec, disc, asof)
    if not ann > 0.0:
        raise DegenerateSwapError("annuity is zero: no remaining fixed payments")
    return floating_leg_pv(spec, disc, fwd, fixings, asof) / ann
