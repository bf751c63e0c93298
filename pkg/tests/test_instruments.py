import math
from datetime import date, timedelta

import numpy as np
import pytest

from rfr_transition.curves import EST, DiscountCurve, apply_spread, flat_curve, simple_forward
from rfr_transition.errors import CollateralMismatchError, DegenerateSwapError, InputError, MissingFixingError
from rfr_transition.instruments import (
    EURIBOR_6M,
    IRS_6M_CONVENTIONS,
    OIS_CONVENTIONS,
    ON_EST,
    FixingTable,
    SwapConventions,
    annuity,
    floating_leg_pv,
    make_swap,
    par_rate,
    price_swap,
    shift_fixings,
    spot_compounded_rate,
)
from rfr_transition.timegrid import Calendar, DayCount, overnight_subschedule, year_fraction

A = date(2020, 7, 1)
WE = Calendar.WEEKENDS_ONLY


def _curve():
    return DiscountCurve(A, np.array([0.5, 2.0, 10.0]), np.array([-0.002, -0.006, -0.05]))


def test_spot_compounded_zero_and_single_step():
    sub = overnight_subschedule(date(2020, 7, 6), date(2020, 7, 7), WE)
    assert spot_compounded_rate(FixingTable({date(2020, 7, 6): 0.0}), sub) == 0.0
    assert spot_compounded_rate(FixingTable({date(2020, 7, 6): 0.01}), sub) == pytest.approx(0.01, abs=1e-13)


def test_spot_compounded_week_brute_force():
    sub = overnight_subschedule(date(2020, 7, 6), date(2020, 7, 13), WE)
    fx = FixingTable({d: -0.0045 for d in sub.fixing_dates})
    growth = (1 - 0.0045 / 360) ** 4 * (1 - 0.0045 * 3 / 360)
    assert spot_compounded_rate(fx, sub) == pytest.approx((growth - 1) / (7 / 360), abs=1e-17)


def test_missing_fixing_names_date():
    sub = overnight_subschedule(date(2020, 7, 6), date(2020, 7, 8), WE)
    with pytest.raises(MissingFixingError, match="2020-07-07"):
        spot_compounded_rate(FixingTable({date(2020, 7, 6): 0.0}), sub)


def test_fixing_table_rejects_weekend_and_nan():
    with pytest.raises(InputError):
        FixingTable({date(2020, 7, 4): 0.0})
    with pytest.raises(InputError):
        FixingTable({date(2020, 7, 6): math.nan})


def test_shift_fixings():
    fx = FixingTable({date(2020, 7, 6): 0.0, date(2020, 7, 7): 0.0})
    assert shift_fixings(fx, 0.0).rates == fx.rates
    assert set(shift_fixings(fx, -0.00085).rates.values()) == {-0.00085}
    sub = overnight_subschedule(date(2020, 7, 6), date(2020, 7, 8), WE)
    gap = spot_compounded_rate(shift_fixings(fx, -0.00085), sub) - spot_compounded_rate(fx, sub)
    assert gap == pytest.approx(-0.00085, abs=1e-8)


def test_annuity_flat_zero_two_years():
    conv = SwapConventions(12, DayCount.THIRTY_E_360, 12, DayCount.ACT_360, WE)
    spec = make_swap(A, 24, conv)
    assert annuity(spec, flat_curve(A, 0.0)) == 2.0


def test_annuity_empty_after_maturity():
    spec = make_swap(A, 24, OIS_CONVENTIONS)
    late = flat_curve(date(2023, 1, 2), 0.01)
    assert annuity(spec, late) == 0.0
    with pytest.raises(DegenerateSwapError):
        par_rate(spec, late)


def test_annuity_flat_one_percent_five_years():
    conv = SwapConventions(12, DayCount.THIRTY_E_360, 12, DayCount.ACT_360, WE)
    spec = make_swap(A, 60, conv)
    dates = spec.fixed_schedule.dates
    # 2023-07-01 is a Saturday, so the third and fourth accruals are not whole years
    taus = [year_fraction(a, b, DayCount.THIRTY_E_360) for a, b in zip(dates, dates[1:])]
    assert taus[2] == 362 / 360
    expected = sum(math.exp(-0.01 * (d - A).days / 365) * tau for d, tau in zip(dates[1:], taus))
    assert annuity(spec, flat_curve(A, 0.01)) == pytest.approx(expected, abs=1e-14)


def test_collateral_mismatch():
    spec = make_swap(A, 24, OIS_CONVENTIONS, collateral=EST)
    with pytest.raises(CollateralMismatchError):
        annuity(spec, flat_curve(A, 0.01))


def test_par_round_trip_and_antisymmetry():
    c = _curve()
    spec = make_swap(A, 84, OIS_CONVENTIONS, notional=1e7)
    k = par_rate(spec, c)
    assert abs(price_swap(spec.with_rate(k), c)) <= 1e-10 * spec.notional
    payer = make_swap(A, 84, OIS_CONVENTIONS, 0.01, 1e7, 1)
    receiver = make_swap(A, 84, OIS_CONVENTIONS, 0.01, 1e7, -1)
    assert price_swap(payer, c) == -price_swap(receiver, c)


def test_receiver_ois_brute_force():
    c = flat_curve(A, 0.01)
    spec = make_swap(A, 24, OIS_CONVENTIONS, 0.012, 1.0, -1)

    def p(d):  # flat 1% continuously compounded on ACT/365F
        return math.exp(-0.01 * (d - A).days / 365)

    dates = spec.fixed_schedule.dates
    floating = sum(p(b) - p(e) for b, e in zip(dates, dates[1:]))
    fixed = sum(p(e) * 0.012 * (e - b).days / 360 for b, e in zip(dates, dates[1:]))
    assert price_swap(spec, c) == pytest.approx(fixed - floating, abs=1e-15)
    assert price_swap(spec, c) == pytest.approx(0.00417003014260, abs=1e-14)


def test_single_period_par_equals_compounded_forward():
    c = _curve()
    conv = SwapConventions(12, DayCount.ACT_360, 12, DayCount.ACT_360)
    spec = make_swap(A, 12, conv)
    assert par_rate(spec, c) == pytest.approx(simple_forward(c, A, spec.maturity), abs=1e-16)
    assert par_rate(spec, flat_curve(A, 0.0)) == 0.0


def test_ois_floating_leg_telescopes():
    c = _curve()
    spec = make_swap(A, 120, OIS_CONVENTIONS)
    assert floating_leg_pv(spec, c, c) == pytest.approx(1.0 - c.df(spec.maturity), abs=1e-12)


def test_forward_source_must_match_underlying():
    c = _curve()
    spec = make_swap(A, 24, OIS_CONVENTIONS, underlying=ON_EST)
    with pytest.raises(InputError):
        price_swap(spec, c, c)
    eonia_leg = make_swap(A, 24, OIS_CONVENTIONS)
    assert price_swap(spec, c, apply_spread(c, -0.00085, EST)) < price_swap(eonia_leg, c, c)


def test_irs_uses_pseudo_curve_forwards():
    disc = _curve()
    fwd = apply_spread(disc, 0.003, EURIBOR_6M)
    spec = make_swap(A, 24, IRS_6M_CONVENTIONS, 0.0, underlying=EURIBOR_6M)
    periods = list(spec.float_schedule.periods())
    assert len(periods) == 4
    expected = sum(disc.df(e) * simple_forward(fwd, b, e) * tau for b, e, tau in periods)
    assert price_swap(spec, disc, fwd) == pytest.approx(expected, abs=1e-15)


def test_seasoned_ois_uses_fixings_then_curve():
    c = flat_curve(A, 0.005)
    start = date(2020, 6, 1)
    spec = make_swap(start, 12, OIS_CONVENTIONS, 0.0)
    sub = overnight_subschedule(start, spec.maturity)
    past = [d for d in sub.fixing_dates if d < A]
    fx = FixingTable({d: -0.0046 for d in past})
    growth = 1.0
    for d, tau in zip(sub.fixing_dates, sub.year_fractions):
        if d < A:
            growth *= 1.0 + fx[d] * tau
    growth *= c.df(A) / c.df(spec.maturity)
    expected = c.df(spec.maturity) * (growth - 1.0)
    assert price_swap(spec, c, fixings=fx) == pytest.approx(expected, abs=1e-16)
    with pytest.raises(MissingFixingError):
        price_swap(spec, c)


def test_swap_spec_validation():
    with pytest.raises(InputError):
        make_swap(A, 12, OIS_CONVENTIONS, notional=0.0)
    with pytest.raises(InputError):
        make_swap(A, 12, OIS_CONVENTIONS, payer=2)
    with pytest.raises(InputError):
        make_swap(A, 12, OIS_CONVENTIONS, underlying="LIBOR-3M")
