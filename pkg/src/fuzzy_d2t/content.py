"""Content determination: trend, count and fuzzy-period messages."""
from __future__ import annotations

import math
import operator
from dataclasses import dataclass, field
from datetime import date
from typing import Mapping, Sequence, Union

from .errors import InvariantError, SeriesError
from .knowledge_base import FuzzyKnowledgeBase, LinguisticTerm
from .protoform import (
    DataSeries,
    QuantifiedStatement,
    SelectionCriteria,
    enumerate_candidates,
    select_statements,
)


@dataclass(frozen=True)
class QuantifiedTrendMessage:
    variable: str
    statements: tuple[QuantifiedStatement, ...]

    def __post_init__(self):
        object.__setattr__(self, "statements", tuple(self.statements))
        if not self.statements:
            raise InvariantError(f"trend message for {self.variable!r} has no statements")

    @property
    def key(self) -> str:
        return f"trend:{self.variable}"

    @property
    def dominant(self) -> QuantifiedStatement:
        """The statement with the highest FD (statements are stored FD-descending)."""
        return self.statements[0]


_OPS = {">": operator.gt, ">=": operator.ge, "<": operator.lt, "<=": operator.le, "==": operator.eq}


@dataclass(frozen=True)
class CrispCondition:
    op: str = ">"
    threshold: float = 0.0

    def __post_init__(self):
        if self.op not in _OPS:
            raise ValueError(f"unsupported comparison {self.op!r}")

    def __call__(self, value: float) -> bool:
        return _OPS[self.op](value, self.threshold)

    def describe(self) -> str:
        return f"value {self.op} {self.threshold:g}"


@dataclass(frozen=True)
class CountMessage:
    variable: str
    predicate: CrispCondition
    count: int
    period: tuple[date, date]

    def __post_init__(self):
        start, end = self.period
        if start > end:
            raise InvariantError("count period starts after it ends")
        if not 0 <= self.count <= (end - start).days + 1:
            raise InvariantError(f"count {self.count} exceeds the period length")

    @property
    def key(self) -> str:
        return f"count:{self.variable}"


@dataclass(frozen=True)
class FuzzyPeriodMessage:
    variable: str
    term: LinguisticTerm
    start: date
    end: date
    avg_fd: float
    adjacent: tuple[tuple[str, float], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "adjacent", tuple(tuple(a) for a in self.adjacent))
        if self.start > self.end:
            raise InvariantError("fuzzy period starts after it ends")

    @property
    def key(self) -> str:
        return f"period:{self.variable}:{self.term.name}:{self.start.isoformat()}:{self.end.isoformat()}"

    @property
    def length(self) -> int:
        return (self.end - self.start).days + 1


Message = Union[QuantifiedTrendMessage, CountMessage, FuzzyPeriodMessage]


@dataclass(frozen=True)
class ContentPlan:
    general: tuple[Message, ...]
    extended: tuple[Message, ...]
    source_period: tuple[date, date]
    variable_order: tuple[str, ...] = ()

    def messages(self) -> list[Message]:
        return [*self.general, *self.extended]


@dataclass(frozen=True)
class ContentConfig:
    """Which variables receive which treatment; the defaults give the standard weather report."""

    trend_variables: tuple[str, ...] = ("temperature", "precipitation")
    count_variable: str = "precipitation"
    count_condition: CrispCondition = field(default_factory=CrispCondition)
    period_variables: tuple[str, ...] = ("temperature",)
    min_len: int = 4
    fd_floor: float = 0.5
    adjacent_threshold: float = 0.3
    criteria: SelectionCriteria = field(default_factory=SelectionCriteria)
    # Drop periods that merely restate a trend term at full strength.
    deviations_only: bool = True
    deviation_fd: float = 0.75
    # Optional restriction of period extraction to named terms, per variable.
    period_terms: Mapping[str, tuple[str, ...]] = field(default_factory=dict)

    def required_variables(self) -> tuple[str, ...]:
        seen = dict.fromkeys([*self.trend_variables, self.count_variable, *self.period_variables])
        return tuple(seen)


def build_trend_message(
    kb: FuzzyKnowledgeBase, variable: str, xs: DataSeries, criteria: SelectionCriteria | None = None
) -> QuantifiedTrendMessage:
    selected = select_statements(enumerate_candidates(kb, variable, xs), criteria)
    return QuantifiedTrendMessage(variable, tuple(selected))


def count_days(
    xs: DataSeries,
    condition: CrispCondition | None = None,
    period: tuple[date, date] | None = None,
) -> CountMessage:
    condition = condition or CrispCondition()
    start, end = period or (xs.start, xs.end)
    if start > end or start < xs.start or end > xs.end:
        raise SeriesError(f"count period {start}..{end} outside series range {xs.start}..{xs.end}")
    count = sum(1 for d, v in zip(xs.dates, xs.values) if start <= d <= end and condition(v))
    return CountMessage(xs.variable, condition, count, (start, end))


def _runs(memberships: list[float], floor: float, min_len: int):
    start = None
    for i, mu in enumerate([*memberships, -1.0]):
        if mu >= floor:
            if start is None:
                start = i
        elif start is not None:
            if i - start >= min_len:
                yield start, i - 1
            start = None


def extract_fuzzy_periods(
    kb: FuzzyKnowledgeBase,
    variable: str,
    xs: DataSeries,
    min_len: int = 4,
    fd_floor: float = 0.5,
    adjacent_threshold: float = 0.3,
    terms: Sequence[str] | None = None,
) -> list[FuzzyPeriodMessage]:
    """Maximal runs of consecutive days on which a term holds to at least ``fd_floor``.

    Runs are taken per term, so runs of different terms may overlap. Each run
    carries the mean membership of its term and of the neighbouring terms in
    the declared order whose mean reaches ``adjacent_threshold``.
    """
    if min_len < 2:
        raise ValueError("min_len must be at least 2")
    var = kb.variable(variable)
    members = {t.name: [t.mf(x) for x in xs.values] for t in var.terms}
    periods = []
    wanted = set(terms) if terms is not None else None
    for t in var.terms:
        if wanted is not None and t.name not in wanted:
            continue
        for i, j in _runs(members[t.name], fd_floor, min_len):
            avg = math.fsum(members[t.name][i:j + 1]) / (j - i + 1)
            if avg < 0.5:
                continue
            adjacent = []
            for n in var.terms:
                if abs(n.rank - t.rank) == 1:
                    mean = math.fsum(members[n.name][i:j + 1]) / (j - i + 1)
                    if mean >= adjacent_threshold:
                        adjacent.append((n.name, mean))
            periods.append(FuzzyPeriodMessage(variable, t, xs.dates[i], xs.dates[j], avg, tuple(adjacent)))
    periods.sort(key=lambda p: (p.start, p.end, p.term.rank))
    return periods


def _deviates(period: FuzzyPeriodMessage, trends: dict[str, QuantifiedTrendMessage], limit: float) -> bool:
    trend = trends.get(period.variable)
    if trend is None:
        return True
    trend_terms = {s.term for s in trend.statements}
    return period.term.name not in trend_terms or period.avg_fd <= limit


def determine_content(kb: FuzzyKnowledgeBase, table, config: ContentConfig | None = None) -> ContentPlan:
    """Build the full content plan from an observation table."""
    config = config or ContentConfig()
    trends = {v: build_trend_message(kb, v, table.series(v), config.criteria) for v in config.trend_variables}
    general: list[Message] = list(trends.values())
    general.append(count_days(table.series(config.count_variable), config.count_condition))

    extended: list[Message] = []
    for v in config.period_variables:
        periods = extract_fuzzy_periods(
            kb, v, table.series(v), config.min_len, config.fd_floor, config.adjacent_threshold,
            config.period_terms.get(v),
        )
        if config.deviations_only:
            periods = [p for p in periods if _deviates(p, trends, config.deviation_fd)]
        extended.extend(periods)

    start, end = table.dates[0], table.dates[-1]
    return ContentPlan(tuple(general), tuple(extended), (start, end), kb.variable_order)
