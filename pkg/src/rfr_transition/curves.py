"""Deterministic discount curves and the forward rates derived from them.

Curves keep their own clock: ACT/365F years from the anchor date.  Log
discount factors are interpolated linearly between pillars (piecewise flat
instantaneous forwards) and extrapolated with the last segment's forward.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from datetime import date
from typing import Sequence

import numpy as np

from .timegrid import DayCount, OvernightSubschedule, year_fraction

__all__ = [
    "DiscountCurve",
    "ESTR_DELTA",
    "apply_spread",
    "compounded_forward_continuous",
    "compounded_forward_discrete",
    "flat_curve",
    "simple_forward",
    "zero_rate",
]

#: r_ESTR - r_EONIA, the fixed transition spread (-8.5 bp).
ESTR_DELTA = -0.00085

EON = "EON"
EST = "EST"


def curve_time(anchor: date, d: date) -> float:
    return (d - anchor).days / 365.0


@dataclass(frozen=True)
class DiscountCurve:
    """Discount factors ``P(t;T)`` for one collateral/index tag.

    ``times`` and ``log_dfs`` exclude the anchor; ``P(anchor) = 1`` is implied.
    ``pillar_dates`` is optional metadata used when dumping the curve.
    """

    anchor: date
    times: np.ndarray
    log_dfs: np.ndarray
    tag: str = EON
    pillar_dates: tuple[date, ...] = ()
    _grid_t: np.ndarray = field(init=False, repr=False, compare=False)
    _grid_l: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        times = np.asarray(self.times, dtype=float)
        log_dfs = np.asarray(self.log_dfs, dtype=float)
        if times.ndim != 1 or times.shape != log_dfs.shape or times.size == 0:
            raise ValueError("times and log_dfs must be non-empty 1-d arrays of equal length")
        if times[0] <= 0.0 or np.any(np.diff(times) <= 0.0):
            raise ValueError("pillar times must be positive and strictly increasing")
        if not np.all(np.isfinite(log_dfs)):
            raise ValueError("log discount factors must be finite")
        if self.pillar_dates and len(self.pillar_dates) != times.size:
            raise ValueError("pillar_dates must match times")
        times.setflags(write=False)
        log_dfs.setflags(write=False)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "log_dfs", log_dfs)
        object.__setattr__(self, "pillar_dates", tuple(self.pillar_dates))
        grid_t = np.concatenate(([0.0], times))
        grid_l = np.concatenate(([0.0], log_dfs))
        grid_t.setflags(write=False)
        grid_l.setflags(write=False)
        object.__setattr__(self, "_grid_t", grid_t)
        object.__setattr__(self, "_grid_l", grid_l)

    @classmethod
    def from_dates(
        cls, anchor: date, pillar_dates: Sequence[date], dfs: Sequence[float], tag: str = EON
    ) -> "DiscountCurve":
        times = [curve_time(anchor, d) for d in pillar_dates]
        return cls(anchor, np.array(times), np.log(np.asarray(dfs, dtype=float)), tag, tuple(pillar_dates))

    @property
    def index(self) -> str:
        """Rate index part of the tag (``"EURIBOR-6M@EON"`` -> ``"EURIBOR-6M"``)."""
        return self.tag.split("@", 1)[0]

    @property
    def last_time(self) -> float:
        return float(self.times[-1])

    def retag(self, tag: str) -> "DiscountCurve":
        return DiscountCurve(self.anchor, self.times, self.log_dfs, tag, self.pillar_dates)

    def time_of(self, d: date) -> float:
        if d < self.anchor:
            raise ValueError(f"{d} is before curve anchor {self.anchor}")
        return curve_time(self.anchor, d)

    def log_df_at(self, t):
        """Interpolated ``ln P`` at curve time(s) ``t`` (scalar or array)."""
        t_arr = np.asarray(t, dtype=float)
        if np.any(t_arr < 0.0):
            raise ValueError("curve queried before its anchor")
        grid_t, grid_l = self._grid_t, self._grid_l
        out = np.interp(t_arr, grid_t, grid_l)
        beyond = t_arr > grid_t[-1]
        if np.any(beyond):
            slope = (grid_l[-1] - grid_l[-2]) / (grid_t[-1] - grid_t[-2])
            out = np.where(beyond, grid_l[-1] + slope * (t_arr - grid_t[-1]), out)
        if np.ndim(out) == 0:
            return float(out)
        return out

    def df_at(self, t):
        return np.exp(self.log_df_at(t))

    def df(self, d: date) -> float:
        """``P(anchor; d)``."""
        return math.exp(self.log_df_at(self.time_of(d)))

    def dfs(self, dates: Sequence[date]) -> np.ndarray:
        ordinals = np.fromiter((x.toordinal() for x in dates), dtype=np.int64)
        offsets = ordinals - self.anchor.toordinal()
        if offsets.size and offsets.min() < 0:
            raise ValueError("curve queried before its anchor")
        return np.exp(self.log_df_at(offsets / 365.0))

    def pillar_dfs(self) -> np.ndarray:
        return np.exp(self.log_dfs)


def flat_curve(anchor: date, rate: float, tag: str = EON, horizon: float = 100.0) -> DiscountCurve:
    """Flat continuously compounded zero rate ``rate`` on the curve clock."""
    times = np.array([1.0, horizon])
    return DiscountCurve(anchor, times, -rate * times, tag)


def zero_rate(curve: DiscountCurve, d: date, dc: DayCount = DayCount.ACT_365F) -> float:
    """``-ln P(t;T) / tau(t;T)``."""
    if d <= curve.anchor:
        raise ValueError(f"zero rate needs T > anchor ({d} <= {curve.anchor})")
    return -curve.log_df_at(curve.time_of(d)) / year_fraction(curve.anchor, d, dc)


def simple_forward(curve: DiscountCurve, d1: date, d2: date, dc: DayCount = DayCount.ACT_360) -> float:
    """``(P(T1)/P(T2) - 1) / tau(T1, T2)``."""
    if not d1 < d2:
        raise ValueError(f"forward needs T1 < T2, got {d1} >= {d2}")
    ratio = math.exp(curve.log_df_at(curve.time_of(d1)) - curve.log_df_at(curve.time_of(d2)))
    return (ratio - 1.0) / year_fraction(d1, d2, dc)


def apply_spread(
    curve: DiscountCurve, delta: float, tag: str | None = None, day_count: DayCount = DayCount.ACT_365F
) -> DiscountCurve:
    """Shift every discount factor by ``exp(-delta * tau(t;T))``.

    The shift accrues on ``day_count`` measured from the anchor.  Because
    that is linear in curve time for all supported ACT conventions, the
    shifted curve is again exactly log-linear between the same pillars.
    """
    if not math.isfinite(delta):
        raise ValueError("spread must be finite")
    if day_count is DayCount.ACT_365F:
        scale = 1.0
    elif day_count is DayCount.ACT_360:
        scale = 365.0 / 360.0
    else:
        raise ValueError("spread accrual must use an ACT day count")
    shifted = curve.log_dfs - delta * scale * curve.times
    return DiscountCurve(curve.anchor, curve.times, shifted, tag or curve.tag, curve.pillar_dates)


def _sub_log_dfs(curve: DiscountCurve, sub: OvernightSubschedule) -> np.ndarray:
    if sub.start < curve.anchor:
        raise ValueError(f"subschedule starts {sub.start} before curve anchor {curve.anchor}")
    return np.log(curve.dfs(sub.dates))


def compounded_forward_discrete(curve: DiscountCurve, sub: OvernightSubschedule, delta: float = 0.0) -> float:
    """Expected daily-compounded rate with every overnight forward shifted by ``delta``.

    Evaluates the full product ``prod_k (P_{k-1}/P_k + delta*tau_k)`` with no
    truncation in ``delta``.
    """
    log_p = _sub_log_dfs(curve, sub)
    ratios = np.exp(log_p[:-1] - log_p[1:])
    taus = np.asarray(sub.year_fractions)
    growth = float(np.prod(ratios + delta * taus))
    return (growth - 1.0) / sub.accrual


def compounded_forward_continuous(
    curve: DiscountCurve, d1: date, d2: date, delta: float = 0.0, dc: DayCount = DayCount.ACT_360
) -> float:
    """Continuous-compounding limit ``(exp(delta*tau) P(T1)/P(T2) - 1) / tau``."""
    if not d1 < d2:
        raise ValueError(f"forward needs T1 < T2, got {d1} >= {d2}")
    tau = year_fraction(d1, d2, dc)
    ratio = math.exp(curve.log_df_at(curve.time_of(d1)) - curve.log_df_at(curve.time_of(d2)))
    return (math.exp(delta * tau) * ratio - 1.0) / tau
