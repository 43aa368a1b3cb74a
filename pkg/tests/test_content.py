import math
import random
from datetime import date

import pytest

from conftest import series, table
from fuzzy_d2t.content import (
    ContentConfig,
    CrispCondition,
    FuzzyPeriodMessage,
    QuantifiedTrendMessage,
    build_trend_message,
    count_days,
    determine_content,
    extract_fuzzy_periods,
)
from fuzzy_d2t.errors import InvariantError, SeriesError
from fuzzy_d2t.ingestion import load_observations
from oracles import trapezoid


def test_constant_series_single_statement(kb):
    msg = build_trend_message(kb, "temperature", series("temperature", [7.0] * 30))
    assert len(msg.statements) == 1 and msg.dominant.fd == 1.0
    assert msg.key == "trend:temperature"


def test_trend_message_needs_statements():
    with pytest.raises(InvariantError):
        QuantifiedTrendMessage("temperature", ())


class TestCount:
    def test_winter_fixture(self, kb, winter_csv):
        xs = load_observations(winter_csv, kb).series("precipitation")
        assert count_days(xs).count == 77
        assert count_days(xs).count == sum(1 for v in xs.values if v > 0)

    def test_all_zero_and_all_positive(self):
        assert count_days(series("precipitation", [0.0] * 90)).count == 0
        assert count_days(series("precipitation", [0.2] * 90)).count == 90

    def test_sub_period_and_condition(self):
        xs = series("precipitation", [0, 1, 2, 3, 4, 5])
        msg = count_days(xs, CrispCondition(">=", 2), (date(2015, 1, 2), date(2015, 1, 5)))
        assert msg.count == 3 and msg.period == (date(2015, 1, 2), date(2015, 1, 5))

    def test_period_out_of_range(self):
        with pytest.raises(SeriesError, match="outside"):
            count_days(series("precipitation", [1, 2]), period=(date(2014, 12, 31), date(2015, 1, 2)))

    def test_unknown_operator(self):
        with pytest.raises(ValueError):
            CrispCondition("~", 0)

    def test_random_against_filter_oracle(self):
        rng = random.Random(11)
        for _ in range(50):
            values = [rng.choice([0.0, 0.0, rng.uniform(0, 30)]) for _ in range(rng.randint(1, 120))]
            assert count_days(series("precipitation", values)).count == len([v for v in values if v > 0])


class TestPeriods:
    def test_full_core_run(self, kb):
        temps = [7.0] * 3 + [15.0] * 6 + [7.0] * 3
        periods = [p for p in extract_fuzzy_periods(kb, "temperature", series("temperature", temps)) if p.term.name == "warm"]
        assert len(periods) == 1
        p = periods[0]
        assert (p.start, p.end, p.avg_fd, p.length) == (date(2015, 1, 4), date(2015, 1, 9), 1.0, 6)

    def test_warm_055_with_adjacent_cold_035(self, kb):
        # 8 days at 11.6875 (warm 0.5625, cold 0.4375) and 2 at 22 (warm 0.5, hot 0.5).
        temps = [5.0] + [11.6875] * 8 + [22.0] * 2 + [5.0]
        p = next(p for p in extract_fuzzy_periods(kb, "temperature", series("temperature", temps)) if p.term.name == "warm")
        warm = [trapezoid(10, 13, 20, 24, t) for t in temps[1:11]]
        cold = [trapezoid(0, 5, 10, 13, t) for t in temps[1:11]]
        assert p.avg_fd == pytest.approx(sum(warm) / 10) == pytest.approx(0.55)
        assert dict(p.adjacent) == pytest.approx({"cold": sum(cold) / 10})
        assert dict(p.adjacent)["cold"] == pytest.approx(0.35)

    def test_run_averaging_below_half_discarded(self, kb):
        # A term whose memberships sit at the floor cannot average below it,
        # so use a floor of 0.4 to produce a 0.45 run that must still be dropped.
        temps = [11.35] * 6
        got = extract_fuzzy_periods(kb, "temperature", series("temperature", temps), fd_floor=0.4)
        warm = [p for p in got if p.term.name == "warm"]
        assert trapezoid(10, 13, 20, 24, 11.35) == pytest.approx(0.45)
        assert warm == []

    def test_short_runs_ignored(self, kb):
        temps = [7.0] * 3 + [15.0] * 3 + [7.0] * 3
        assert not [p for p in extract_fuzzy_periods(kb, "temperature", series("temperature", temps)) if p.term.name == "warm"]

    def test_min_len_validated(self, kb):
        with pytest.raises(ValueError):
            extract_fuzzy_periods(kb, "temperature", series("temperature", [1.0]), min_len=1)

    def test_term_filter(self, kb):
        temps = [7.0] * 5 + [15.0] * 5
        got = extract_fuzzy_periods(kb, "temperature", series("temperature", temps), terms=("warm",))
        assert {p.term.name for p in got} == {"warm"}

    def test_runs_are_maximal_and_disjoint(self, kb):
        rng = random.Random(3)
        for _ in range(40):
            temps = [rng.uniform(-10, 40) for _ in range(rng.randint(5, 80))]
            xs = series("temperature", temps)
            periods = extract_fuzzy_periods(kb, "temperature", xs)
            for p in periods:
                mu = [p.term.mf(v) for v in temps]
                i, j = (p.start - xs.start).days, (p.end - xs.start).days
                assert all(m >= 0.5 for m in mu[i:j + 1])
                assert i == 0 or mu[i - 1] < 0.5
                assert j == len(temps) - 1 or mu[j + 1] < 0.5
                assert p.avg_fd >= 0.5
                assert p.avg_fd == pytest.approx(math.fsum(mu[i:j + 1]) / (j - i + 1))
            for a in periods:
                for b in periods:
                    if a is not b and a.term == b.term:
                        assert a.end < b.start or b.end < a.start


def test_determine_content_winter(kb, winter_csv):
    cp = determine_content(kb, load_observations(winter_csv, kb))
    trends = [m for m in cp.general if isinstance(m, QuantifiedTrendMessage)]
    assert [(t.variable, t.dominant.quantifier.name, t.dominant.term) for t in trends] == [
        ("temperature", "most", "cold"), ("precipitation", "most", "wet"),
    ]
    assert cp.general[-1].count == 77
    assert [(p.term.name, p.start, p.end) for p in cp.extended] == [
        ("warm", date(2014, 12, 14), date(2014, 12, 19)),
        ("cold", date(2015, 1, 2), date(2015, 1, 6)),
        ("warm", date(2015, 1, 20), date(2015, 1, 26)),
    ]
    assert cp.source_period == (date(2014, 12, 1), date(2015, 2, 28))


def test_deviation_filter_is_configurable(kb, winter_csv):
    t = load_observations(winter_csv, kb)
    everything = determine_content(kb, t, ContentConfig(deviations_only=False))
    filtered = determine_content(kb, t)
    assert len(everything.extended) > len(filtered.extended)
    assert set(p.key for p in filtered.extended) <= set(p.key for p in everything.extended)
    dropped = [p for p in everything.extended if p not in filtered.extended]
    assert all(p.term.name == "cold" and p.avg_fd > 0.75 for p in dropped)


def test_determinism(kb):
    rng = random.Random(8)
    t = table([rng.uniform(-5, 30) for _ in range(40)], [rng.uniform(0, 12) for _ in range(40)])
    assert determine_content(kb, t) == determine_content(kb, t)


def test_period_message_validation(kb):
    with pytest.raises(InvariantError):
        FuzzyPeriodMessage("temperature", kb.term("temperature", "warm"), date(2015, 1, 5), date(2015, 1, 1), 0.9)
