"""Sequential single-curve (OIS) and multi-curve (IBOR) bootstrapping."""

from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import date
from typing import Callable, Iterable, Sequence

import numpy as np

from .curves import EON, EST, DiscountCurve, curve_time
from .errors import ConvergenceError, InputError
from .instruments import (
    EURIBOR_6M,
    FORWARD_INDEX,
    IRS_6M_CONVENTIONS,
    OIS_CONVENTIONS,
    ON_EONIA,
    ON_EST,
    SwapConventions,
    SwapSpec,
    make_swap,
    par_rate,
    price_swap,
)

__all__ = [
    "OIS",
    "IRS_6M",
    "Quote",
    "QuoteSet",
    "bootstrap_ibor",
    "bootstrap_ois",
    "quote_swap",
    "repricing_residuals",
]

OIS = "OIS"
IRS_6M = "IRS-6M"
KINDS = (OIS, IRS_6M)
RATE_BAND = (-0.05, 0.20)

LOG_DF_TOL = 1e-14
MAX_ITER = 100


@dataclass(frozen=True)
class Quote:
    kind: str
    tenor_months: int
    rate: float
    asof: date

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise InputError(f"unknown quote kind {self.kind!r}")
        if self.tenor_months <= 0:
            raise InputError(f"tenor must be positive, got {self.tenor_months}")
        lo, hi = RATE_BAND
        if not (lo < self.rate < hi):
            raise InputError(f"{self.kind} {self.tenor_months}M rate {self.rate} outside sanity band {RATE_BAND}")


@dataclass(frozen=True)
class QuoteSet:
    asof: date
    quotes: tuple[Quote, ...]

    def __post_init__(self) -> None:
        quotes = tuple(self.quotes)
        if not quotes:
            raise InputError("quote set is empty")
        for kind in KINDS:
            tenors = [q.tenor_months for q in quotes if q.kind == kind]
            if any(b <= a for a, b in zip(tenors, tenors[1:])):
                raise InputError(f"{kind} tenors must be strictly increasing without duplicates")
        for q in quotes:
            if q.asof != self.asof:
                raise InputError(f"quote {q.kind} {q.tenor_months}M has asof {q.asof}, expected {self.asof}")
        object.__setattr__(self, "quotes", quotes)

    def of_kind(self, kind: str) -> "QuoteSet":
        return QuoteSet(self.asof, tuple(q for q in self.quotes if q.kind == kind))

    def shifted(self, amounts: float | Sequence[float]) -> "QuoteSet":
        if isinstance(amounts, (int, float)):
            amounts = [float(amounts)] * len(self.quotes)
        return QuoteSet(
            self.asof,
            tuple(Quote(q.kind, q.tenor_months, q.rate + a, q.asof) for q, a in zip(self.quotes, amounts)),
        )

    @property
    def rates(self) -> np.ndarray:
        return np.array([q.rate for q in self.quotes])

    @property
    def tenors(self) -> list[int]:
        return [q.tenor_months for q in self.quotes]

    def __len__(self) -> int:
        return len(self.quotes)

    def __iter__(self):
        return iter(self.quotes)


def quote_swap(
    q: Quote,
    conventions: SwapConventions | None = None,
    underlying: str | None = None,
    collateral: str = EON,
) -> SwapSpec:
    """Par swap a quote refers to, starting on the quote date (no spot lag)."""
    if conventions is None:
        conventions = OIS_CONVENTIONS if q.kind == OIS else IRS_6M_CONVENTIONS
    if underlying is None:
        underlying = ON_EONIA if q.kind == OIS else EURIBOR_6M
    return make_swap(q.asof, q.tenor_months, conventions, q.rate, 1.0, 1, underlying, collateral)


def _solve(f: Callable[[float], float], lo: float, hi: float, x0: float, label: str) -> float:
    """Newton on a bracketed scalar root, falling back to bisection."""
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if math.copysign(1.0, flo) == math.copysign(1.0, fhi):
        raise ConvergenceError(f"{label}: no root bracketed in log-df [{lo:.6g}, {hi:.6g}]; check quotes")
    x = min(max(x0, lo), hi)
    h = 1e-7
    for _ in range(MAX_ITER):
        fx = f(x)
        if fx == 0.0:
            return x
        if math.copysign(1.0, fx) == math.copysign(1.0, flo):
            lo, flo = x, fx
        else:
            hi = x
        slope = (f(x + h) - f(x - h)) / (2.0 * h)
        x_new = x - fx / slope if slope != 0.0 else math.nan
        if not (lo < x_new < hi):
            x_new = 0.5 * (lo + hi)
        if abs(x_new - x) <= LOG_DF_TOL or hi - lo <= LOG_DF_TOL:
            return x_new
        x = x_new
    raise ConvergenceError(f"{label}: no convergence after {MAX_ITER} iterations")


def _sequential(
    anchor: date,
    specs: Sequence[SwapSpec],
    labels: Sequence[str],
    tag: str,
    residual: Callable[[SwapSpec, DiscountCurve], float],
) -> DiscountCurve:
    times: list[float] = []
    log_dfs: list[float] = []
    pillar_dates: list[date] = []
    for spec, label in zip(specs, labels):
        maturity = spec.maturity
        t_new = curve_time(anchor, maturity)
        t_prev = times[-1] if times else 0.0
        x_prev = log_dfs[-1] if log_dfs else 0.0
        if t_new <= t_prev:
            raise InputError(f"{label}: maturity {maturity} does not extend the curve")

        def f(x: float) -> float:
            trial = DiscountCurve(anchor, np.array(times + [t_new]), np.array(log_dfs + [x]), tag)
            return residual(spec, trial)

        dt = t_new - t_prev
        x0 = x_prev - spec.fixed_rate * dt
        x = _solve(f, x_prev - 0.5 * dt - 0.01, x_prev + 0.2 * dt + 0.01, x0, label)
        times.append(t_new)
        log_dfs.append(x)
        pillar_dates.append(maturity)
    return DiscountCurve(anchor, np.array(times), np.array(log_dfs), tag, tuple(pillar_dates))


def bootstrap_ois(
    quotes: QuoteSet,
    conventions: SwapConventions = OIS_CONVENTIONS,
    tag: str = EON,
) -> DiscountCurve:
    """Single-curve bootstrap: one pillar per OIS maturity, collateral = underlying.

    >>> from datetime import date
    >>> qs = QuoteSet(date(2020, 1, 2), (Quote("OIS", 12, 0.0, date(2020, 1, 2)),))
    >>> float(bootstrap_ois(qs).pillar_dfs()[0])
    1.0
    """
    ois = quotes.of_kind(OIS)
    underlying = ON_EST if tag == EST else ON_EONIA
    fwd_index = FORWARD_INDEX[underlying]
    specs = [quote_swap(q, conventions, underlying, tag) for q in ois]
    labels = [f"OIS {q.tenor_months}M" for q in ois]

    def residual(spec: SwapSpec, trial: DiscountCurve) -> float:
        fwd = trial if trial.index == fwd_index else trial.retag(fwd_index)
        return price_swap(spec, trial, fwd)

    return _sequential(quotes.asof, specs, labels, tag, residual)


def bootstrap_ibor(
    quotes: QuoteSet,
    disc: DiscountCurve,
    conventions: SwapConventions = IRS_6M_CONVENTIONS,
    underlying: str = EURIBOR_6M,
    kind: str = IRS_6M,
) -> DiscountCurve:
    """Pseudo-discount curve for ``underlying`` forwards given discounting ``disc``.

    The first segment runs flat-forward from the anchor, which pins the
    first 6M forward to the one implied over the whole first pillar.
    """
    irs = quotes.of_kind(kind)
    if quotes.asof != disc.anchor:
        raise InputError(f"quotes asof {quotes.asof} differs from discount curve anchor {disc.anchor}")
    tag = f"{FORWARD_INDEX[underlying]}@{disc.tag}"
    specs = [quote_swap(q, conventions, underlying, disc.tag) for q in irs]
    last_cover = disc.pillar_dates[-1] if disc.pillar_dates else None
    if last_cover is not None and specs and specs[-1].maturity > last_cover:
        raise InputError(
            f"discount curve ends {last_cover} before last {kind} maturity {specs[-1].maturity}"
        )
    labels = [f"{kind} {q.tenor_months}M" for q in irs]

    def residual(spec: SwapSpec, trial: DiscountCurve) -> float:
        return price_swap(spec, disc, trial)

    return _sequential(quotes.asof, specs, labels, tag, residual)


def repricing_residuals(
    quotes: Iterable[Quote],
    disc: DiscountCurve,
    fwd: DiscountCurve | None = None,
    conventions: SwapConventions | None = None,
    underlying: str | None = None,
) -> list[tuple[Quote, float, float]]:
    """``(quote, pv, par_rate - quote)`` for each quote, unit notional."""
    out = []
    for q in quotes:
        spec = quote_swap(q, conventions, underlying, disc.tag)
        f = fwd if fwd is not None else disc
        if f is disc and FORWARD_INDEX[spec.underlying] != disc.index:
            f = disc.retag(FORWARD_INDEX[spec.underlying])
        pv = price_swap(spec, disc, f)
        out.append((q, pv, par_rate(spec, disc, f) - q.rate))
    return out
