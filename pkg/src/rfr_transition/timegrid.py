"""Dates, day counts, business-day calendars and coupon schedules."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from datetime import date, timedelta
from functools import lru_cache

from dateutil.easter import easter
from dateutil.relativedelta import relativedelta

__all__ = [
    "Calendar",
    "DayCount",
    "OvernightSubschedule",
    "Schedule",
    "add_months",
    "generate_schedule",
    "overnight_subschedule",
    "parse_date",
    "year_fraction",
]


def parse_date(text: str | date) -> date:
    """Parse an ISO-8601 ``YYYY-MM-DD`` string."""
    if isinstance(text, date):
        return text
    return date.fromisoformat(text.strip())


def add_months(d: date, months: int) -> date:
    # day clipped to month end, e.g. Jan 31 + 1M -> Feb 28/29
    return d + relativedelta(months=months)


class DayCount(enum.Enum):
    ACT_360 = "ACT/360"
    ACT_365F = "ACT/365F"
    THIRTY_E_360 = "30E/360"

    @classmethod
    def parse(cls, text: str) -> "DayCount":
        key = text.strip().upper().replace("_", "/")
        for dc in cls:
            if dc.value == key:
                return dc
        aliases = {"ACT/365": cls.ACT_365F, "ACT/365FIXED": cls.ACT_365F, "30E360": cls.THIRTY_E_360}
        if key in aliases:
            return aliases[key]
        raise ValueError(f"unknown day count {text!r}")

    def year_fraction(self, d1: date, d2: date) -> float:
        return year_fraction(d1, d2, self)


def year_fraction(d1: date, d2: date, dc: DayCount) -> float:
    """Accrual fraction between ``d1`` and ``d2`` (requires ``d1 <= d2``)."""
    if d1 > d2:
        raise ValueError(f"year_fraction requires d1 <= d2, got {d1} > {d2}")
    if dc is DayCount.ACT_360:
        return (d2 - d1).days / 360.0
    if dc is DayCount.ACT_365F:
        return (d2 - d1).days / 365.0
    if dc is DayCount.THIRTY_E_360:
        day1 = min(d1.day, 30)
        day2 = min(d2.day, 30)
        days = 360 * (d2.year - d1.year) + 30 * (d2.month - d1.month) + (day2 - day1)
        return days / 360.0
    raise ValueError(f"unsupported day count {dc!r}")


@lru_cache(maxsize=None)
def _target_holidays(year: int) -> frozenset[date]:
    good_friday = easter(year) - timedelta(days=2)
    easter_monday = easter(year) + timedelta(days=1)
    return frozenset(
        {
            date(year, 1, 1),
            good_friday,
            easter_monday,
            date(year, 5, 1),
            date(year, 12, 25),
            date(year, 12, 26),
        }
    )


class Calendar(enum.Enum):
    WEEKENDS_ONLY = "WeekendsOnly"
    TARGET = "Target"

    @classmethod
    def parse(cls, text: str) -> "Calendar":
        key = text.strip().lower().replace("_", "")
        for cal in cls:
            if cal.value.lower() == key:
                return cal
        raise ValueError(f"unknown calendar {text!r}")

    def is_business_day(self, d: date) -> bool:
        if d.weekday() >= 5:
            return False
        if self is Calendar.TARGET:
            return d not in _target_holidays(d.year)
        return True

    def following(self, d: date) -> date:
        while not self.is_business_day(d):
            d += timedelta(days=1)
        return d

    def preceding(self, d: date) -> date:
        while not self.is_business_day(d):
            d -= timedelta(days=1)
        return d

    def modified_following(self, d: date) -> date:
        adjusted = self.following(d)
        if adjusted.month != d.month:
            adjusted = self.preceding(d)
        return adjusted

    def next_business_day(self, d: date) -> date:
        return self.following(d + timedelta(days=1))

    def business_days_between(self, start: date, end: date) -> list[date]:
        """Business days in ``[start, end]``."""
        out = []
        d = start
        while d <= end:
            if self.is_business_day(d):
                out.append(d)
            d += timedelta(days=1)
        return out


@dataclass(frozen=True)
class Schedule:
    """Coupon dates ``[T_0, ..., T_n]`` with accruals under ``day_count``."""

    dates: tuple[date, ...]
    day_count: DayCount
    year_fractions: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        if len(self.dates) < 2:
            raise ValueError("a schedule needs at least one period")
        for a, b in zip(self.dates, self.dates[1:]):
            if not a < b:
                raise ValueError(f"schedule dates must strictly increase: {a} !< {b}")
        fractions = tuple(year_fraction(a, b, self.day_count) for a, b in zip(self.dates, self.dates[1:]))
        if self.year_fractions and tuple(self.year_fractions) != fractions:
            raise ValueError("stored year fractions do not match the day count")
        object.__setattr__(self, "dates", tuple(self.dates))
        object.__setattr__(self, "year_fractions", fractions)

    @property
    def start(self) -> date:
        return self.dates[0]

    @property
    def end(self) -> date:
        return self.dates[-1]

    @property
    def n_periods(self) -> int:
        return len(self.dates) - 1

    def periods(self):
        """Yield ``(start, end, accrual)`` per period."""
        for i in range(self.n_periods):
            yield self.dates[i], self.dates[i + 1], self.year_fractions[i]


@dataclass(frozen=True)
class OvernightSubschedule:
    """Daily fixing grid nested in one floating coupon, accrued ACT/360."""

    dates: tuple[date, ...]
    year_fractions: tuple[float, ...]

    @property
    def start(self) -> date:
        return self.dates[0]

    @property
    def end(self) -> date:
        return self.dates[-1]

    @property
    def fixing_dates(self) -> tuple[date, ...]:
        return self.dates[:-1]

    @property
    def accrual(self) -> float:
        return year_fraction(self.start, self.end, DayCount.ACT_360)

    def __len__(self) -> int:
        return len(self.year_fractions)


def _parse_tenor_months(tenor: str | int) -> int:
    if isinstance(tenor, int):
        return tenor
    text = tenor.strip().upper()
    if text.endswith("M"):
        return int(text[:-1])
    if text.endswith("Y"):
        return 12 * int(text[:-1])
    raise ValueError(f"cannot parse tenor {tenor!r}")


def generate_schedule(
    start: date,
    end: date | str | int,
    frequency_months: int,
    calendar: Calendar = Calendar.TARGET,
    day_count: DayCount = DayCount.ACT_360,
) -> Schedule:
    """Roll a regular schedule forward from ``start`` with a short final stub.

    ``end`` is either a date or a tenor (``"2Y"``, ``"6M"`` or a month count).
    Unadjusted dates are ``start + k * frequency`` and each is rolled Modified
    Following; the start date itself is kept as given.
    """
    if frequency_months <= 0:
        raise ValueError("frequency must be a positive number of months")
    if isinstance(end, date):
        unadjusted_end = end
    else:
        unadjusted_end = add_months(start, _parse_tenor_months(end))
    if unadjusted_end <= start:
        raise ValueError(f"empty schedule span {start} -> {unadjusted_end}")
    final = calendar.modified_following(unadjusted_end)

    dates = [start]
    k = 1
    while True:
        unadjusted = add_months(start, k * frequency_months)
        if unadjusted >= unadjusted_end:
            break
        rolled = calendar.modified_following(unadjusted)
        if rolled < final and rolled > dates[-1]:
            dates.append(rolled)
        k += 1
    dates.append(final)
    return Schedule(tuple(dates), day_count)


@lru_cache(maxsize=4096)
def overnight_subschedule(t_prev: date, t_i: date, calendar: Calendar = Calendar.TARGET) -> OvernightSubschedule:
    """Business-day steps covering ``(t_prev, t_i]``."""
    if not t_prev < t_i:
        raise ValueError(f"subschedule needs t_prev < t_i, got {t_prev} >= {t_i}")
    for d in (t_prev, t_i):
        if not calendar.is_business_day(d):
            raise ValueError(f"{d} is not a business day on {calendar.value}")
    dates = calendar.business_days_between(t_prev, t_i)
    fractions = tuple((b - a).days / 360.0 for a, b in zip(dates, dates[1:]))
    return OvernightSubschedule(tuple(dates), fractions)
