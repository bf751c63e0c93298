import csv
from datetime import date

import pytest

from rfr_transition import io
from rfr_transition.bootstrap import OIS, Quote, QuoteSet
from rfr_transition.cli import main
from rfr_transition.errors import InputError
from rfr_transition.fixtures import data_path, generate, load

DATA = {name: str(data_path(name)) for name in (
    "ois_2019-06-24.csv", "irs6m_2019-06-24.csv", "credit_2019-06-24.csv",
    "trades_2019-06-24.csv", "fixings_eonia_2019-06-24.csv",
)}
OIS19, IRS19 = DATA["ois_2019-06-24.csv"], DATA["irs6m_2019-06-24.csv"]


def _read(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def _summary(path):
    return {r["quantity"]: float(r["value"]) for r in _read(path)}


def test_number_format():
    assert io.fmt(0.1 + 0.2) == "0.3"
    assert io.fmt(-0.0) == "0"
    assert io.fmt(1 / 3) == "0.333333333333333"
    assert io.fmt(date(2020, 1, 2)) == "2020-01-02"


def test_shipped_fixtures_match_generator():
    for shape in ("2019", "2020"):
        for shipped, fresh in zip(load(shape), generate(shape)):
            assert shipped == fresh


def test_quote_file_round_trip(tmp_path):
    qs = QuoteSet(date(2020, 7, 1), (Quote(OIS, 12, 0.0012345, date(2020, 7, 1)),))
    p = io.write_quotes(tmp_path / "q.csv", qs)
    assert io.read_quotes(p) == qs
    assert p.read_bytes().endswith(b"\n") and b"\r" not in p.read_bytes()


@pytest.mark.parametrize(
    "body, message",
    [
        ("asof,kind,tenor_months\n", ":1: missing columns rate"),
        ("asof,kind,tenor_months,rate\n2020-07-01,OIS,12,x\n", ":2: rate 'x' is not a number"),
        ("asof,kind,tenor_months,rate\n2020-07-01,OIS,12,0.01\n2020-07-01,SWP,24,0.01\n", ":3: unknown kind"),
        ("asof,kind,tenor_months,rate\n2020-07-01,OIS,12,0.5\n", ":2: OIS 12M rate 0.5 outside"),
        ("asof,kind,tenor_months,rate\n2020-13-01,OIS,12,0.01\n", ":2: asof '2020-13-01'"),
        ("asof,kind,tenor_months,rate\n2020-07-01,OIS,1.5,0.01\n", ":2: tenor_months"),
    ],
)
def test_quote_file_errors_have_line_numbers(tmp_path, body, message):
    p = tmp_path / "bad.csv"
    p.write_text(body)
    with pytest.raises(InputError, match=message):
        io.read_quotes(p)


def test_trade_and_fixing_readers():
    trades = io.read_trades(DATA["trades_2019-06-24.csv"])
    assert [t for t, _ in trades] == ["T1", "T2", "T3", "T4", "T5"]
    assert trades[1][1].payer == -1 and trades[1][1].collateral == "EST"
    fixings = io.read_fixings(DATA["fixings_eonia_2019-06-24.csv"])
    assert date(2019, 4, 19) not in fixings  # Good Friday


def test_credit_reader(tmp_path):
    curve = io.read_credit_curve(DATA["credit_2019-06-24.csv"], date(2019, 6, 24), 0.4)
    assert curve.hazard.tolist() == [0.01, 0.015, 0.02]
    p = tmp_path / "c.csv"
    p.write_text("pillar_date,hazard_rate\n2020-01-01,-0.1\n")
    with pytest.raises(InputError):
        io.read_credit_curve(p, date(2019, 6, 24), 0.4)


def test_bootstrap_command(tmp_path, capsys):
    assert main(["bootstrap", "--quotes", OIS19, "--irs-quotes", IRS19, "--out", str(tmp_path)]) == 0
    rows = _read(tmp_path / "bootstrap_residuals.csv")
    assert len(rows) == 40
    assert max(abs(float(r["pv"])) for r in rows) <= 1e-10
    assert _read(tmp_path / "curve_EON.csv")[0].keys() == {"pillar_date", "discount_factor", "zero_rate_act365f"}
    assert "max |PV|" in capsys.readouterr().out


def test_bootstrap_zero_quotes(tmp_path):
    q = tmp_path / "zero.csv"
    q.write_text("asof,kind,tenor_months,rate\n" + "".join(f"2020-07-01,OIS,{m},0\n" for m in (6, 12, 60)))
    assert main(["bootstrap", "--quotes", str(q), "--out", str(tmp_path)]) == 0
    assert {r["discount_factor"] for r in _read(tmp_path / "curve_EON.csv")} == {"1"}


def test_bad_rate_exits_2(tmp_path, capsys):
    q = tmp_path / "bad.csv"
    q.write_text("asof,kind,tenor_months,rate\n2020-07-01,OIS,12,abc\n")
    assert main(["bootstrap", "--quotes", str(q), "--out", str(tmp_path)]) == 2
    assert "bad.csv:2:" in capsys.readouterr().err


def test_asof_mismatch_exits_2(tmp_path):
    assert main(["bootstrap", "--quotes", OIS19, "--asof", "2019-06-25", "--out", str(tmp_path)]) == 2


def test_unknown_flag_exits_2(tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["bootstrap", "--quotes", OIS19, "--frobnicate"])
    assert exc.value.code == 2


def test_crossed_quotes_exit_3(tmp_path):
    q = tmp_path / "crossed.csv"
    # a 2Y rate this far below the 1Y rate forces a discount factor above the allowed bracket
    q.write_text("asof,kind,tenor_months,rate\n2020-07-01,OIS,12,0.19\n2020-07-01,OIS,13,-0.049\n")
    assert main(["bootstrap", "--quotes", str(q), "--out", str(tmp_path)]) == 3


def test_transition_ois_command(tmp_path, capsys):
    assert main(["transition-ois", "--quotes", OIS19, "--out", str(tmp_path)]) == 0
    summary = _summary(tmp_path / "summary_ois_discrete.csv")
    assert summary["rmse_bps"] <= 0.5 and summary["delta_bps"] == pytest.approx(-8.5)
    assert "RMSE" in capsys.readouterr().out
    delta_line = _read(tmp_path / "series_ois_discrete_delta_bps.csv")
    assert {r["delta_bps"] for r in delta_line} == {"-8.5"}


def test_transition_ois_zero_delta(tmp_path):
    assert main(["transition-ois", "--quotes", OIS19, "--delta", "0", "--out", str(tmp_path)]) == 0
    assert {r["par_spread_bps"] for r in _read(tmp_path / "series_ois_discrete_spread_bps.csv")} == {"0"}


def test_transition_ois_regimes_close(tmp_path):
    for regime in ("discrete", "continuous"):
        assert main(["transition-ois", "--quotes", OIS19, "--regime", regime, "--out", str(tmp_path)]) == 0
    d = [float(r["par_spread_bps"]) for r in _read(tmp_path / "series_ois_discrete_spread_bps.csv")]
    c = [float(r["par_spread_bps"]) for r in _read(tmp_path / "series_ois_continuous_spread_bps.csv")]
    # second-order compounding term, Delta^2 tau / 2 per annual coupon, in bps
    assert max(abs(a - b) for a, b in zip(d, c)) <= 0.01


def test_transition_irs_command(tmp_path):
    assert main(["transition-irs", "--quotes", OIS19, "--irs-quotes", IRS19, "--out", str(tmp_path)]) == 0
    assert len(_read(tmp_path / "irs_constant_par_rates.csv")) == 100
    summary = _summary(tmp_path / "summary_irs.csv")
    assert summary["forward_diff_rmse_bps"] <= 0.5
    assert main(["transition-irs", "--quotes", OIS19, "--irs-quotes", IRS19, "--delta", "0",
                 "--out", str(tmp_path / "z")]) == 0
    assert {r["diff_bps"] for r in _read(tmp_path / "z" / "series_irs_forward_diff_bps.csv")} == {"0"}


def test_transition_irs_missing_file_exits_2(tmp_path):
    assert main(["transition-irs", "--quotes", str(tmp_path / "nope.csv"), "--irs-quotes", IRS19,
                 "--out", str(tmp_path)]) == 2
    assert main(["transition-irs", "--quotes", OIS19, "--out", str(tmp_path)]) == 2


def test_fva_command(tmp_path, capsys):
    args = ["fva", "--asof", "2019-06-24", "--hazard", "0.02", "--recovery", "0.4", "--maturity", "5",
            "--out", str(tmp_path)]
    assert main(args) == 0
    report = _summary(tmp_path / "fva_report.csv")
    assert report["fva"] == pytest.approx(-0.0570975, abs=1e-7)
    assert abs(report["transition_diff"]) <= 1e-14
    assert "FVA" in capsys.readouterr().out
    assert main(args[:-2] + ["--cashflow", "-1", "--out", str(tmp_path)]) == 2
    assert main(["fva", "--asof", "2019-06-24", "--maturity", "5", "--out", str(tmp_path)]) == 0
    assert _summary(tmp_path / "fva_report.csv")["fva"] == 0.0


def test_fva_with_curve_and_credit_file(tmp_path):
    assert main(["fva", "--quotes", OIS19, "--credit", DATA["credit_2019-06-24.csv"], "--maturity",
                 "2029-06-25", "--spread-daycount", "ACT/360", "--out", str(tmp_path)]) == 0
    report = _summary(tmp_path / "fva_report.csv")
    assert report["fva"] == pytest.approx(report["fva_integral"], abs=1e-12)
    t = (date(2029, 6, 25) - date(2019, 6, 24)).days / 365
    assert 0.0 < abs(report["transition_diff"]) <= 0.00085 * t * 5 / 360


def test_price_command(tmp_path):
    args = ["price", "--quotes", OIS19, "--irs-quotes", IRS19, "--trades", DATA["trades_2019-06-24.csv"],
            "--out", str(tmp_path)]
    # the seasoned trade needs fixings
    assert main(args) == 2
    assert main(args + ["--fixings", DATA["fixings_eonia_2019-06-24.csv"]]) == 0
    rows = {r["trade_id"]: r for r in _read(tmp_path / "prices.csv")}
    assert float(rows["T3"]["par_rate"]) == pytest.approx(float(rows["T4"]["par_rate"]), abs=1e-12)


def test_out_dir_precedence(tmp_path, monkeypatch):
    monkeypatch.setenv("RFR_OUT_DIR", str(tmp_path / "env"))
    assert main(["bootstrap", "--quotes", OIS19]) == 0
    assert (tmp_path / "env" / "curve_EON.csv").exists()
    assert main(["bootstrap", "--quotes", OIS19, "--out", str(tmp_path / "flag")]) == 0
    assert (tmp_path / "flag" / "curve_EON.csv").exists()
