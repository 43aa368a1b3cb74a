from datetime import date, timedelta
from pathlib import Path

import pytest

from fuzzy_d2t.ingestion import ObservationTable
from fuzzy_d2t.knowledge_base import default_kb, load_kb_file
from fuzzy_d2t.protoform import DataSeries

FIXTURES = Path(__file__).parent / "fixtures"


def days(n, start=date(2015, 1, 1)):
    return tuple(start + timedelta(days=i) for i in range(n))


def series(variable, values, start=date(2015, 1, 1)):
    return DataSeries(variable, days(len(values), start), tuple(float(v) for v in values))


def table(temperature, precipitation, humidity=None, start=date(2015, 1, 1)):
    n = len(temperature)
    humidity = humidity if humidity is not None else [70.0] * n
    return ObservationTable(
        days(n, start),
        {
            "temperature": tuple(map(float, temperature)),
            "precipitation": tuple(map(float, precipitation)),
            "humidity": tuple(map(float, humidity)),
        },
    )


@pytest.fixture(scope="session")
def kb():
    return default_kb()


@pytest.fixture(scope="session")
def lex(kb):
    return kb.lexicon


@pytest.fixture(scope="session")
def rain_kb():
    return load_kb_file(FIXTURES / "rain_scenario_kb.toml")


@pytest.fixture(scope="session")
def winter_csv():
    return FIXTURES / "winter_2014.csv"
