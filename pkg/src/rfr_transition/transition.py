"""EONIA -> ESTR transition: forward spreads, OIS par-rate spreads and IRS impacts.

The overnight spread ``delta = r_ESTR - r_EONIA`` is carried through the
daily compounding of an OIS coupon.  ``sigma_discrete`` keeps the first
order of the product expansion in ``delta``; ``sigma_continuous`` is the
continuous-compounding limit.  Both are exact in the vanishing-rates limit,
where they collapse to ``delta``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from datetime import date

import numpy as np

from .bootstrap import IRS_6M, OIS, Quote, QuoteSet, bootstrap_ibor, bootstrap_ois, quote_swap
from .curves import EON, EST, ESTR_DELTA, DiscountCurve, apply_spread, simple_forward
from .errors import DegenerateSwapError, InputError
from .instruments import SwapSpec, annuity, par_rate
from .timegrid import Calendar, DayCount, OvernightSubschedule, generate_schedule, overnight_subschedule

__all__ = [
    "DISCRETE",
    "CONTINUOUS",
    "ForwardDiffReport",
    "ForwardDiffRow",
    "TransitionReport",
    "TransitionRow",
    "constant_forward_rates_analysis",
    "constant_par_rates_analysis",
    "delta_par_rate",
    "sigma_continuous",
    "sigma_discrete",
    "theoretical_estr_ois_quotes",
]

DISCRETE = "discrete"
CONTINUOUS = "continuous"
REGIMES = (DISCRETE, CONTINUOUS)

BP = 1e-4


def _rms(values) -> float:
    arr = np.asarray(values, dtype=float)
    return math.sqrt(float(np.mean(arr**2))) if arr.size else 0.0


@dataclass(frozen=True)
class TransitionRow:
    tenor_months: int
    eonia_par: float
    estr_par: float
    par_spread: float
    par_spread_minus_delta: float


@dataclass(frozen=True)
class TransitionReport:
    """Per-tenor EONIA vs ESTR par rates.

    ``par_spread = estr_par - eonia_par``; ``par_spread_minus_delta`` is that
    spread net of ``reference_spread`` (the overnight delta for OIS reports,
    zero for the IRS discounting-switch report).  Summary statistics are over
    the residual column, in basis points.
    """

    asof: date
    rows: tuple[TransitionRow, ...]
    reference_spread: float
    label: str = ""
    rmse_bps: float = field(init=False)
    max_abs_bps: float = field(init=False)
    min_bps: float = field(init=False)
    max_bps: float = field(init=False)

    def __post_init__(self) -> None:
        resid = self.residuals_bps()
        object.__setattr__(self, "rows", tuple(self.rows))
        object.__setattr__(self, "rmse_bps", _rms(resid))
        object.__setattr__(self, "max_abs_bps", float(np.max(np.abs(resid))) if resid.size else 0.0)
        object.__setattr__(self, "min_bps", float(np.min(resid)) if resid.size else 0.0)
        object.__setattr__(self, "max_bps", float(np.max(resid)) if resid.size else 0.0)

    @classmethod
    def from_rates(cls, asof, tenors, eonia, estr, reference_spread: float, label: str = "") -> "TransitionReport":
        rows = []
        for t, e, s in zip(tenors, eonia, estr):
            spread = s - e
            rows.append(TransitionRow(int(t), float(e), float(s), spread, spread - reference_spread))
        return cls(asof, tuple(rows), reference_spread, label)

    def residuals_bps(self) -> np.ndarray:
        return np.array([r.par_spread_minus_delta for r in self.rows]) / BP

    def estr_quotes(self, kind: str = OIS) -> QuoteSet:
        return QuoteSet(self.asof, tuple(Quote(kind, r.tenor_months, r.estr_par, self.asof) for r in self.rows))


@dataclass(frozen=True)
class ForwardDiffRow:
    start: date
    end: date
    fwd_eonia: float
    fwd_estr: float
    diff_bps: float


@dataclass(frozen=True)
class ForwardDiffReport:
    """EURIBOR forwards bootstrapped under EONIA vs ESTR discounting."""

    asof: date
    rows: tuple[ForwardDiffRow, ...]
    rmse_bps: float = field(init=False)
    curves: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "rows", tuple(self.rows))
        object.__setattr__(self, "rmse_bps", _rms([r.diff_bps for r in self.rows]))

    @property
    def diffs_bps(self) -> np.ndarray:
        return np.array([r.diff_bps for r in self.rows])


def _coupon_ratio(curve: DiscountCurve, start: date, end: date) -> float:
    return math.exp(curve.log_df_at(curve.time_of(start)) - curve.log_df_at(curve.time_of(end)))


def sigma_discrete(curve_eon: DiscountCurve, sub: OvernightSubschedule, delta: float) -> float:
    """First-order ESTR-minus-EONIA compounded forward spread for one coupon.

    ``(delta/tau) * P(T_{i-1})/P(T_i) * sum_l tau_l P(T_{i,l})/P(T_{i,l-1})``
    """
    if sub.start < curve_eon.anchor:
        raise InputError(f"coupon starting {sub.start} precedes curve anchor {curve_eon.anchor}")
    log_p = np.log(curve_eon.dfs(sub.dates))
    inverse_ratios = np.exp(log_p[1:] - log_p[:-1])
    weighted = float(np.dot(np.asarray(sub.year_fractions), inverse_ratios))
    outer = math.exp(log_p[0] - log_p[-1])
    return delta / sub.accrual * outer * weighted


def sigma_continuous(
    curve_eon: DiscountCurve, d1: date, d2: date, delta: float, dc: DayCount = DayCount.ACT_360
) -> float:
    """``(exp(delta*tau) - 1)/tau * P(T1)/P(T2)``, the continuous-compounding spread."""
    if not d1 < d2:
        raise InputError(f"coupon needs T1 < T2, got {d1} >= {d2}")
    tau = dc.year_fraction(d1, d2)
    return math.expm1(delta * tau) / tau * _coupon_ratio(curve_eon, d1, d2)


def coupon_sigmas(spec: SwapSpec, curve_eon: DiscountCurve, delta: float, regime: str = DISCRETE):
    """``(T_i, tau_R, Sigma_i)`` for each future floating coupon of ``spec``."""
    if regime not in REGIMES:
        raise InputError(f"regime must be one of {REGIMES}, got {regime!r}")
    out = []
    for start, end, tau in spec.float_schedule.periods():
        if end < curve_eon.anchor:
            continue
        if start < curve_eon.anchor:
            raise InputError(f"coupon {start}->{end} is already accruing; spreads apply to future coupons only")
        if regime == DISCRETE:
            sigma = sigma_discrete(curve_eon, overnight_subschedule(start, end, spec.calendar), delta)
        else:
            sigma = sigma_continuous(curve_eon, start, end, delta, spec.float_schedule.day_count)
        out.append((end, tau, sigma))
    return out


def delta_par_rate(spec: SwapSpec, curve_eon: DiscountCurve, delta: float, regime: str = DISCRETE) -> float:
    """OIS par-rate spread: discounted-accrual average of the coupon spreads."""
    ann = annuity(spec, curve_eon)
    if not ann > 0.0:
        raise DegenerateSwapError("annuity is zero")
    rows = coupon_sigmas(spec, curve_eon, delta, regime)
    if not rows:
        return 0.0
    ends, taus, sigmas = zip(*rows)
    return float(np.dot(curve_eon.dfs(ends), np.asarray(taus) * np.asarray(sigmas))) / ann


def theoretical_estr_ois_quotes(
    eonia_quotes: QuoteSet,
    delta: float = ESTR_DELTA,
    regime: str = DISCRETE,
    curve_eon: DiscountCurve | None = None,
) -> tuple[QuoteSet, TransitionReport]:
    """ESTR OIS par rates ``R_EON + delta_par`` on the EONIA-collateralised curve."""
    ois = eonia_quotes.of_kind(OIS)
    if curve_eon is None:
        curve_eon = bootstrap_ois(ois, tag=EON)
    eonia, estr = [], []
    for q in ois:
        spec = quote_swap(q, collateral=curve_eon.tag)
        eonia.append(q.rate)
        estr.append(q.rate + delta_par_rate(spec, curve_eon, delta, regime))
    report = TransitionReport.from_rates(ois.asof, ois.tenors, eonia, estr, delta, f"ois-{regime}")
    return report.estr_quotes(OIS), report


def _discount_pair(ois_quotes: QuoteSet, delta: float, estr_curve: str):
    disc_eon = bootstrap_ois(ois_quotes.of_kind(OIS), tag=EON)
    if estr_curve == "spread":
        disc_est = apply_spread(disc_eon, delta, EST)
    elif estr_curve == "quotes":
        estr_quotes, _ = theoretical_estr_ois_quotes(ois_quotes, delta, DISCRETE, disc_eon)
        disc_est = bootstrap_ois(estr_quotes, tag=EST)
    else:
        raise InputError(f"estr_curve must be 'spread' or 'quotes', got {estr_curve!r}")
    return disc_eon, disc_est


def constant_par_rates_analysis(
    irs_quotes: QuoteSet,
    ois_quotes: QuoteSet,
    delta: float = ESTR_DELTA,
    horizon_months: int = 600,
    estr_curve: str = "spread",
) -> ForwardDiffReport:
    """Indirect impact: rebootstrap EURIBOR 6M under ESTR discounting, same par quotes.

    Reports ``F_EON - F_ESTR`` on the semiannual grid out to ``horizon_months``
    (100 periods for 50Y).  ``estr_curve="spread"`` shifts the EONIA curve by
    ``delta``; ``"quotes"`` bootstraps it from theoretical ESTR OIS quotes.
    """
    if irs_quotes.asof != ois_quotes.asof:
        raise InputError("IRS and OIS quotes must share the asof date")
    irs = irs_quotes.of_kind(IRS_6M)
    if not len(irs):
        raise InputError("no IRS-6M quotes")
    if max(irs.tenors) < horizon_months or max(ois_quotes.of_kind(OIS).tenors) < max(irs.tenors):
        raise InputError(f"quotes must cover the {horizon_months}M horizon")
    disc_eon, disc_est = _discount_pair(ois_quotes, delta, estr_curve)
    fwd_eon = bootstrap_ibor(irs, disc_eon)
    fwd_est = bootstrap_ibor(irs, disc_est)
    grid = generate_schedule(irs.asof, horizon_months, 6, Calendar.TARGET, DayCount.ACT_360)
    rows = []
    for start, end, _ in grid.periods():
        f_eon = simple_forward(fwd_eon, start, end)
        f_est = simple_forward(fwd_est, start, end)
        rows.append(ForwardDiffRow(start, end, f_eon, f_est, (f_eon - f_est) / BP))
    curves = {"disc_eon": disc_eon, "disc_est": disc_est, "fwd_eon": fwd_eon, "fwd_est": fwd_est}
    return ForwardDiffReport(irs.asof, tuple(rows), curves=curves)


def constant_forward_rates_analysis(
    irs_quotes: QuoteSet,
    ois_quotes: QuoteSet,
    delta: float = ESTR_DELTA,
    estr_curve: str = "spread",
) -> TransitionReport:
    """Direct impact: reprice market IRS under ESTR discounting with EONIA-based forwards.

    ``eonia_par`` holds the market quotes, ``estr_par`` the theoretical par
    rates; the residual is their difference (reference spread zero).
    """
    if irs_quotes.asof != ois_quotes.asof:
        raise InputError("IRS and OIS quotes must share the asof date")
    irs = irs_quotes.of_kind(IRS_6M)
    if not len(irs):
        raise InputError("no IRS-6M quotes")
    disc_eon, disc_est = _discount_pair(ois_quotes, delta, estr_curve)
    fwd_eon = bootstrap_ibor(irs, disc_eon)
    market, theoretical = [], []
    for q in irs:
        spec = quote_swap(q, collateral=disc_est.tag)
        market.append(q.rate)
        theoretical.append(par_rate(spec, disc_est, fwd_eon))
    return TransitionReport.from_rates(irs.asof, irs.tenors, market, theoretical, 0.0, "irs-constant-forwards")
