"""Hazard-rate credit curves, risky zero-coupon bonds and the simplified FVA.

Credit and rates are independent: a ``CreditCurve`` never looks at the
discount curve, so survival and risky bond prices factorise.  Recovery
follows the recovery-of-treasury model, ``P_I = P [Rec + (1 - Rec) S]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import date
from typing import Sequence

import numpy as np

from .curves import DiscountCurve, apply_spread, curve_time
from .errors import InputError, UnsupportedCaseError
from .timegrid import DayCount, year_fraction

__all__ = [
    "CreditCurve",
    "FundingSetup",
    "InvarianceReport",
    "fva_deterministic_exposure",
    "fva_integral",
    "fva_single_cashflow",
    "funding_zero_spread",
    "risky_zcb",
    "short_funding_spread",
    "survival",
    "transition_invariance_check",
]


def _years(anchor: date, x: date | float) -> float:
    if isinstance(x, date):
        if x < anchor:
            raise InputError(f"{x} is before anchor {anchor}")
        return curve_time(anchor, x)
    t = float(x)
    if t < 0.0:
        raise InputError("time before anchor")
    return t


@dataclass(frozen=True)
class CreditCurve:
    """Piecewise-constant hazard rate.

    ``hazard[k]`` applies on ``(times[k-1], times[k]]`` with ``times[-1]``
    implicitly 0; the last rate extends beyond the final pillar.
    """

    anchor: date
    times: np.ndarray
    hazard: np.ndarray
    recovery: float = 0.4

    def __post_init__(self) -> None:
        times = np.atleast_1d(np.asarray(self.times, dtype=float))
        hazard = np.atleast_1d(np.asarray(self.hazard, dtype=float))
        if times.shape != hazard.shape or times.size == 0:
            raise InputError("times and hazard rates must be equal-length and non-empty")
        if times[0] <= 0.0 or np.any(np.diff(times) <= 0.0):
            raise InputError("credit pillar times must be positive and increasing")
        if np.any(hazard < 0.0) or not np.all(np.isfinite(hazard)):
            raise InputError("hazard rates must be finite and non-negative")
        if not 0.0 <= self.recovery < 1.0:
            raise InputError(f"recovery must lie in [0, 1), got {self.recovery}")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "hazard", hazard)
        cum = np.concatenate(([0.0], np.cumsum(hazard * np.diff(np.concatenate(([0.0], times))))))
        object.__setattr__(self, "_cum", cum)

    @classmethod
    def flat(cls, anchor: date, hazard: float, recovery: float = 0.4) -> "CreditCurve":
        return cls(anchor, np.array([1.0]), np.array([hazard]), recovery)

    @classmethod
    def from_dates(
        cls, anchor: date, pillar_dates: Sequence[date], hazard: Sequence[float], recovery: float = 0.4
    ) -> "CreditCurve":
        return cls(anchor, np.array([curve_time(anchor, d) for d in pillar_dates]), np.array(hazard), recovery)

    @property
    def breakpoints(self) -> np.ndarray:
        return self.times[:-1]

    def hazard_at(self, t: float) -> float:
        # right-continuous inside the curve: gamma(t) for t in (t_{k-1}, t_k]
        k = int(np.searchsorted(self.times, t, side="left"))
        return float(self.hazard[min(k, self.hazard.size - 1)])

    def cumulative_hazard(self, t: float) -> float:
        k = int(np.searchsorted(self.times, t, side="left"))
        k = min(k, self.hazard.size - 1)
        t_left = self.times[k - 1] if k > 0 else 0.0
        return float(self._cum[k] + self.hazard[k] * (t - t_left))

    def survival_at(self, t: float) -> float:
        return math.exp(-self.cumulative_hazard(t))


@dataclass(frozen=True)
class FundingSetup:
    """Reference (collateral) discount curve plus the institution's credit curve."""

    disc: DiscountCurve
    credit: CreditCurve

    def __post_init__(self) -> None:
        if self.disc.anchor != self.credit.anchor:
            raise InputError("discount and credit curves must share the anchor date")

    @property
    def anchor(self) -> date:
        return self.disc.anchor


def survival(credit: CreditCurve, T: date | float) -> float:
    return credit.survival_at(_years(credit.anchor, T))


def risky_zcb(setup: FundingSetup, T: date | float) -> float:
    t = _years(setup.anchor, T)
    rec = setup.credit.recovery
    return float(setup.disc.df_at(t)) * (rec + (1.0 - rec) * setup.credit.survival_at(t))


def funding_zero_spread(setup: FundingSetup, T: date | float, dc: DayCount = DayCount.ACT_365F) -> float:
    """Zero funding spread ``ln(P / P_I) / tau(t;T)``; independent of ``P``."""
    t = _years(setup.anchor, T)
    if t <= 0.0:
        raise InputError("funding spread needs T > anchor")
    tau = _tau(setup.anchor, T, t, dc)
    rec = setup.credit.recovery
    return -math.log(rec + (1.0 - rec) * setup.credit.survival_at(t)) / tau


def _tau(anchor: date, T: date | float, t: float, dc: DayCount) -> float:
    if isinstance(T, date):
        return year_fraction(anchor, T, dc)
    if dc is DayCount.ACT_360:
        return t * 365.0 / 360.0
    if dc is DayCount.ACT_365F:
        return t
    raise InputError("a 30E/360 fraction needs calendar dates")


def short_funding_spread(credit: CreditCurve, u: date | float) -> float:
    """Instantaneous funding spread ``gamma(u) (1 - Rec)``."""
    return credit.hazard_at(_years(credit.anchor, u)) * (1.0 - credit.recovery)


def fva_single_cashflow(setup: FundingSetup, cashflow: float, T: date | float) -> float:
    """FVA of one positive cash flow ``C`` at ``T``: ``-(P - P_I) C``."""
    if cashflow < 0.0:
        raise UnsupportedCaseError("the simplified FVA holds only for non-negative exposures")
    t = _years(setup.anchor, T)
    return -(float(setup.disc.df_at(t)) - risky_zcb(setup, t)) * cashflow


def fva_integral(setup: FundingSetup, cashflow: float, T: date | float) -> float:
    """Same FVA from ``-P C int_t^T s_I(u) S_I(u) du``, integrated per hazard segment."""
    if cashflow < 0.0:
        raise UnsupportedCaseError("the simplified FVA holds only for non-negative exposures")
    t_end = _years(setup.anchor, T)
    credit = setup.credit
    edges = [0.0] + [b for b in credit.breakpoints if b < t_end] + [t_end]
    total = 0.0
    for a, b in zip(edges, edges[1:]):
        gamma = credit.hazard_at(b)
        # int_a^b gamma (1-Rec) S(a) exp(-gamma (u-a)) du
        total += (1.0 - credit.recovery) * credit.survival_at(a) * -math.expm1(-gamma * (b - a))
    return -float(setup.disc.df_at(t_end)) * cashflow * total


def fva_deterministic_exposure(setup: FundingSetup, times: Sequence[float], exposures: Sequence[float]) -> float:
    """``-int P(u) H(u)^+ s_I(u) S_I(u) du`` for a step-function exposure.

    ``exposures[k]`` is the exposure on ``[times[k], times[k+1])``; the profile
    ends at ``times[-1]``.  Integration is exact: on every sub-interval
    between discount, credit and exposure breakpoints the integrand is an
    exponential.
    """
    times = np.asarray(times, dtype=float)
    h = np.maximum(np.asarray(exposures, dtype=float), 0.0)
    if times.size != h.size + 1 or np.any(np.diff(times) <= 0.0) or times[0] < 0.0:
        raise InputError("need increasing times with one more entry than exposures")
    disc, credit = setup.disc, setup.credit
    knots = np.union1d(times, np.concatenate((disc.times, credit.times)))
    knots = knots[(knots >= times[0]) & (knots <= times[-1])]
    lgd = 1.0 - credit.recovery
    total = 0.0
    for a, b in zip(knots, knots[1:]):
        k = int(np.searchsorted(times, a, side="right")) - 1
        if h[k] == 0.0:
            continue
        gamma = credit.hazard_at(b)
        log_p_a, log_p_b = disc.log_df_at(a), disc.log_df_at(b)
        rate = gamma - (log_p_b - log_p_a) / (b - a)
        start = math.exp(log_p_a) * credit.survival_at(a)
        span = b - a
        integral = span if rate == 0.0 else -math.expm1(-rate * span) / rate
        total += h[k] * gamma * lgd * start * integral
    return -total


@dataclass(frozen=True)
class InvarianceReport:
    v_eon: float
    v_est: float
    diff: float
    base_eon: float
    base_est: float
    fva_eon: float
    fva_est: float
    spread_eon: float
    spread_est: float
    implied_survival_est: float


def transition_invariance_check(
    setup_eon: FundingSetup,
    delta: float,
    cashflow: float,
    T: date | float,
    spread_day_count: DayCount = DayCount.ACT_365F,
    zero_day_count: DayCount = DayCount.ACT_365F,
) -> InvarianceReport:
    """Fair value of one cash flow before and after the discounting switch.

    The reference curve moves by ``delta`` accrued on ``spread_day_count``
    while the institution's funding zero spread (on ``zero_day_count``)
    moves by ``-delta``, so its funding rate is held.  With matched
    conventions the risky bond price, hence the fair value, is unchanged;
    mismatched conventions leave a residual of order ``delta * tau * 5/360``.
    """
    if cashflow < 0.0:
        raise UnsupportedCaseError("the simplified FVA holds only for non-negative exposures")
    anchor = setup_eon.anchor
    t = _years(anchor, T)
    if t <= 0.0:
        raise InputError("maturity must follow the anchor")
    tau_zero = _tau(anchor, T, t, zero_day_count)
    p_eon = float(setup_eon.disc.df_at(t))
    p_i_eon = risky_zcb(setup_eon, t)
    base_eon = p_eon * cashflow
    fva_eon = fva_single_cashflow(setup_eon, cashflow, t)

    disc_est = apply_spread(setup_eon.disc, delta, "EST", spread_day_count)
    p_est = float(disc_est.df_at(t))
    spread_eon = math.log(p_eon / p_i_eon) / tau_zero
    spread_est = spread_eon - delta
    zero_est = -math.log(p_est) / tau_zero
    p_i_est = math.exp(-(zero_est + spread_est) * tau_zero)

    rec = setup_eon.credit.recovery
    implied_survival = (p_i_est / p_est - rec) / (1.0 - rec)
    base_est = p_est * cashflow
    fva_est = -(p_est - p_i_est) * cashflow
    v_eon = base_eon + fva_eon
    v_est = base_est + fva_est
    return InvarianceReport(
        v_eon, v_est, v_est - v_eon, base_eon, base_est, fva_eon, fva_est, spread_eon, spread_est, implied_survival
    )

