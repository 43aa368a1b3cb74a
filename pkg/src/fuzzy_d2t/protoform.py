"""Fuzzy quantified statements: evaluation, enumeration and selection.

Type-1 statements ("Q Xs are A") use Zadeh's sigma-count::

    FD = mu_Q( (1/n) * sum_i mu_A(x_i) )

Type-2 statements ("Q D Xs are A") use the relative sigma-count with a
configurable t-norm::

    FD = mu_Q( sum_i T(mu_D(d_i), mu_A(a_i)) / sum_i mu_D(d_i) )

Selection objective
-------------------
``select_statements`` picks a small set of statements that describes the
data with high fulfillment while covering enough of it. With ``T`` the FD
threshold, ``G`` the coverage target and ``K`` the maximum set size:

1. *Confident sets*: non-empty sets of at most ``K`` statements, every
   member with ``fd >= T``, whose quantifier coverages add up to ``>= G``.
   The smallest such set wins; among equal sizes the largest FD sum wins.
2. If no confident set exists, the feasible pair (coverage sum ``>= G``,
   any FDs) with the largest FD sum is returned.
3. Otherwise the single highest-FD statement is returned and flagged
   ``low_confidence``.

Remaining ties go to ``tie_break`` and then to the declared quantifier
order. Sums use ``math.fsum`` rounded to 1e-9 so the result does not
depend on the order of the candidate list.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, replace
from datetime import date
from typing import Iterable, NamedTuple, Sequence

from .errors import KBValidationError, SeriesError
from .fuzzy_core import TOL, Tnorm, tnorm_apply
from .knowledge_base import FuzzyKnowledgeBase, LinguisticTerm, Quantifier


@dataclass(frozen=True)
class DataSeries:
    variable: str
    dates: tuple[date, ...]
    values: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "dates", tuple(self.dates))
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if not self.values:
            raise SeriesError(f"series {self.variable!r} is empty")
        if len(self.dates) != len(self.values):
            raise SeriesError(f"series {self.variable!r}: {len(self.dates)} dates for {len(self.values)} values")
        for prev, cur in zip(self.dates, self.dates[1:]):
            if not prev < cur:
                raise SeriesError(f"series {self.variable!r}: dates not strictly increasing at {cur}")

    @classmethod
    def from_points(cls, variable: str, points: Iterable[tuple[date, float]]) -> "DataSeries":
        points = list(points)
        return cls(variable, tuple(d for d, _ in points), tuple(v for _, v in points))

    @property
    def points(self) -> list[tuple[date, float]]:
        return list(zip(self.dates, self.values))

    @property
    def start(self) -> date:
        return self.dates[0]

    @property
    def end(self) -> date:
        return self.dates[-1]

    def __len__(self) -> int:
        return len(self.values)


class TermRef(NamedTuple):
    variable: str
    term: str


@dataclass(frozen=True)
class QuantifiedStatement:
    form: str  # "type1" or "type2"
    quantifier: Quantifier
    summarizer: TermRef
    fd: float
    coverage: float
    qualifier: TermRef | None = None
    conjunct: TermRef | None = None  # second summarizer of "Q Xs are A and B"
    summarizer_rank: int = 0
    vacuous: bool = False
    low_confidence: bool = False

    def __post_init__(self):
        if self.form not in ("type1", "type2"):
            raise ValueError(f"unknown statement form {self.form!r}")
        if (self.form == "type2") != (self.qualifier is not None):
            raise ValueError("type-2 statements need a qualifier and type-1 statements must not have one")
        if not 0.0 <= self.fd <= 1.0:
            raise ValueError(f"fulfillment degree outside [0, 1]: {self.fd!r}")

    @property
    def term(self) -> str:
        return self.summarizer.term

    @property
    def variable(self) -> str:
        return self.summarizer.variable

    @property
    def conjunctive(self) -> bool:
        return self.conjunct is not None

    def order_key(self) -> tuple:
        """Canonical position: declared quantifier order, then summarizer."""
        return (
            self.quantifier.rank,
            self.summarizer.variable,
            self.summarizer_rank,
            self.summarizer.term,
            self.qualifier or ("", ""),
            self.conjunct or ("", ""),
            round(self.fd, 12),
        )

    def describe(self) -> str:
        head = f"{self.quantifier.name} | {self.summarizer.variable}={self.summarizer.term}"
        if self.conjunct:
            head += f" and {self.conjunct.variable}={self.conjunct.term}"
        if self.qualifier:
            head += f" | given {self.qualifier.variable}={self.qualifier.term}"
        return head


@dataclass(frozen=True)
class SelectionCriteria:
    fd_threshold: float = 0.8
    coverage_target: float = 0.5
    tie_break: str = "most-specific-quantifier"
    max_size: int = 2
    exhaustive_limit: int = 20

    def __post_init__(self):
        if not 0.0 < self.fd_threshold <= 1.0:
            raise ValueError("fd_threshold must lie in (0, 1]")
        if not 0.0 < self.coverage_target <= 1.0:
            raise ValueError("coverage_target must lie in (0, 1]")
        if self.tie_break not in ("highest-fd", "most-specific-quantifier"):
            raise ValueError(f"unknown tie_break {self.tie_break!r}")
        if self.max_size < 1:
            raise ValueError("max_size must be at least 1")


class Type2Degree(NamedTuple):
    fd: float
    vacuous: bool


# -- evaluation ----------------------------------------------------------------

def _check_term(a: LinguisticTerm, xs: DataSeries) -> None:
    if a.variable and a.variable != xs.variable:
        raise SeriesError(f"term {a.name!r} belongs to {a.variable!r}, series is {xs.variable!r}")


def _check_aligned(xs: DataSeries, ys: DataSeries) -> None:
    if xs.dates != ys.dates:
        raise SeriesError(f"series {xs.variable!r} and {ys.variable!r} are not aligned on identical dates")


def mean_membership(a: LinguisticTerm, xs: DataSeries) -> float:
    if len(xs) == 0:
        raise SeriesError("empty series")
    return math.fsum(a.mf(x) for x in xs.values) / len(xs)


def evaluate_type1(q: Quantifier, a: LinguisticTerm, xs: DataSeries) -> float:
    _check_term(a, xs)
    return q.mf(mean_membership(a, xs))


def evaluate_type2(
    q: Quantifier,
    d: LinguisticTerm,
    a: LinguisticTerm,
    xs_d: DataSeries,
    xs_a: DataSeries,
    t: Tnorm | str = Tnorm.MINIMUM,
) -> Type2Degree:
    _check_term(d, xs_d)
    _check_term(a, xs_a)
    _check_aligned(xs_d, xs_a)
    mu_d = [d.mf(x) for x in xs_d.values]
    mass = math.fsum(mu_d)
    if mass == 0.0:
        return Type2Degree(0.0, True)
    joint = math.fsum(tnorm_apply(t, md, a.mf(y)) for md, y in zip(mu_d, xs_a.values))
    return Type2Degree(q.mf(min(joint / mass, 1.0)), False)


def type1_statement(q: Quantifier, a: LinguisticTerm, xs: DataSeries) -> QuantifiedStatement:
    return QuantifiedStatement(
        form="type1",
        quantifier=q,
        summarizer=TermRef(xs.variable, a.name),
        fd=evaluate_type1(q, a, xs),
        coverage=q.coverage,
        summarizer_rank=a.rank,
    )


def type2_statement(q, d, a, xs_d, xs_a, t=Tnorm.MINIMUM) -> QuantifiedStatement:
    fd, vacuous = evaluate_type2(q, d, a, xs_d, xs_a, t)
    return QuantifiedStatement(
        form="type2",
        quantifier=q,
        summarizer=TermRef(xs_a.variable, a.name),
        qualifier=TermRef(xs_d.variable, d.name),
        fd=fd,
        coverage=q.coverage,
        summarizer_rank=a.rank,
        vacuous=vacuous,
    )


def enumerate_candidates(kb: FuzzyKnowledgeBase, variable: str, xs: DataSeries) -> list[QuantifiedStatement]:
    """Every quantifier x term type-1 statement, quantifier-major."""
    var = kb.variable(variable)
    if xs.variable != variable:
        raise KBValidationError(f"series {xs.variable!r} does not describe variable {variable!r}")
    means = {t.name: mean_membership(t, xs) for t in var.terms}
    out = []
    for q in kb.quantifiers:
        for t in var.terms:
            out.append(QuantifiedStatement(
                form="type1",
                quantifier=q,
                summarizer=TermRef(variable, t.name),
                fd=q.mf(means[t.name]),
                coverage=q.coverage,
                summarizer_rank=t.rank,
            ))
    return out


# -- selection -----------------------------------------------------------------

def _sum9(values: Iterable[float]) -> float:
    return round(math.fsum(values), 9)


def _tie_key(members: Sequence[QuantifiedStatement], tie_break: str) -> tuple:
    if tie_break == "highest-fd":
        return tuple(sorted((-round(s.fd, 9) for s in members)))
    return tuple(sorted((-s.quantifier.rank for s in members)))


def _set_key(members: Sequence[QuantifiedStatement], tie_break: str) -> tuple:
    return (
        -_sum9(s.fd for s in members),
        _tie_key(members, tie_break),
        tuple(sorted(s.order_key() for s in members)),
    )


def _covers(members: Sequence[QuantifiedStatement], target: float) -> bool:
    return math.fsum(s.coverage for s in members) >= target - TOL


def _best(sets: Iterable[Sequence[QuantifiedStatement]], tie_break: str):
    best, best_key = None, None
    for members in sets:
        key = _set_key(members, tie_break)
        if best_key is None or key < best_key:
            best, best_key = members, key
    return best


def _confident_exhaustive(pool, c: SelectionCriteria):
    for size in range(1, min(c.max_size, len(pool)) + 1):
        feasible = (m for m in itertools.combinations(pool, size) if _covers(m, c.coverage_target))
        best = _best(feasible, c.tie_break)
        if best is not None:
            return best
    return None


def _confident_greedy(pool, c: SelectionCriteria):
    # Approximate: take statements by decreasing FD until coverage is met.
    ranked = sorted(pool, key=lambda s: _set_key([s], c.tie_break))
    chosen = []
    for s in ranked:
        if len(chosen) == c.max_size:
            break
        chosen.append(s)
        if _covers(chosen, c.coverage_target):
            return tuple(chosen)
    return None


def select_statements(
    cands: Sequence[QuantifiedStatement], c: SelectionCriteria | None = None
) -> list[QuantifiedStatement]:
    """Choose the statements that describe a variable; see the module docstring."""
    c = c or SelectionCriteria()
    if not cands:
        raise ValueError("select_statements needs at least one candidate")
    # Canonical order first so the result never depends on the input order.
    cands = sorted(cands, key=lambda s: s.order_key())

    pool = [s for s in cands if s.fd >= c.fd_threshold - TOL]
    if len(pool) <= c.exhaustive_limit:
        chosen = _confident_exhaustive(pool, c)
    else:
        chosen = _confident_greedy(pool, c)

    if chosen is None and c.max_size >= 2:
        pairs = (p for p in itertools.combinations(cands, 2) if _covers(p, c.coverage_target))
        chosen = _best(pairs, c.tie_break)

    if chosen is None:
        best = _best(([s] for s in cands), c.tie_break)
        chosen = [replace(best[0], low_confidence=True)]

    return sorted(chosen, key=lambda s: (-round(s.fd, 9), s.order_key()))
