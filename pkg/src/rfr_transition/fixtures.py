"""Synthetic market quote sets shaped like the two reference dates.

Market EONIA OIS and EURIBOR 6M IRS quotes for these dates are proprietary,
so the shipped fixtures are smooth Nelson-Siegel par curves:

* ``2019-06-24``: short end near -0.45%, rising to a positive long end.
* ``2020-06-30``: short end near -0.47%, lower and flatter long end.

IRS 6M quotes add a smooth tenor basis over the OIS curve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import date
from importlib import resources

from .bootstrap import IRS_6M, OIS, Quote, QuoteSet

OIS_TENORS = (1, 2, 3, 6, 9, 12, 18, 24, 36, 48, 60, 72, 84, 96, 108, 120, 144, 180, 240, 300, 360, 480, 600)
IRS_TENORS = (12, 24, 36, 48, 60, 72, 84, 96, 108, 120, 144, 180, 240, 300, 360, 480, 600)


@dataclass(frozen=True)
class NelsonSiegel:
    level: float
    slope: float
    curvature: float
    decay: float

    def __call__(self, years: float) -> float:
        x = years / self.decay
        loading = (1.0 - math.exp(-x)) / x
        return self.level + self.slope * loading + self.curvature * (loading - math.exp(-x))


SHAPES = {
    "2019": (
        date(2019, 6, 24),
        NelsonSiegel(0.0120, -0.0165, -0.0080, 3.0),
        NelsonSiegel(0.0014, 0.0004, 0.0, 5.0),
    ),
    "2020": (
        date(2020, 6, 30),
        NelsonSiegel(-0.0002, -0.0045, -0.0060, 4.0),
        NelsonSiegel(0.0010, 0.0006, 0.0, 5.0),
    ),
}


def generate(shape: str) -> tuple[QuoteSet, QuoteSet]:
    """(OIS, IRS-6M) quote sets rounded to 0.01 bp."""
    asof, ois_curve, basis = SHAPES[shape]
    ois = tuple(Quote(OIS, m, round(ois_curve(m / 12.0), 6), asof) for m in OIS_TENORS)
    irs = tuple(
        Quote(IRS_6M, m, round(ois_curve(m / 12.0) + basis(m / 12.0), 6), asof) for m in IRS_TENORS
    )
    return QuoteSet(asof, ois), QuoteSet(asof, irs)


def data_path(name: str):
    return resources.files("rfr_transition") / "data" / name


def load(shape: str) -> tuple[QuoteSet, QuoteSet]:
    """Shipped fixture CSVs for ``shape`` (``"2019"`` or ``"2020"``)."""
    from .io import read_quotes

    asof = SHAPES[shape][0].isoformat()
    ois = read_quotes(data_path(f"ois_{asof}.csv"))
    irs = read_quotes(data_path(f"irs6m_{asof}.csv"))
    return ois, irs
