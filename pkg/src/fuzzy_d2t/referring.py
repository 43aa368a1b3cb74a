"""Referring expressions for the report period and extracted fuzzy periods.

A fuzzy period can be described by three features: its term, its FD band
and its date range. An expression built from a feature subset *matches*
every entity that agrees on those features. ``distinguishing_features``
returns the smallest subset that matches only the target within a context,
searching subsets exhaustively (there are at most eight).

On a first mention the context is the set of document periods plus the
periods the reader could still be expecting: the same stretch of days under
another term or band, and the same description over other days. Every
feature then rules out a competitor, which yields the full indefinite
description ("a coldish interval from the 2nd to the 6th of January").
Later mentions compete only with entities already introduced and so
shrink to a definite form ("that interval" when nothing else is in play).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from datetime import date, timedelta
from typing import Iterable, Sequence

from .content import FuzzyPeriodMessage
from .errors import AmbiguityError
from .lexicalizer import REPORT_ENTITY, NounPhrase, period_property, report_subject
from .lexicon import Lexicon

FEATURES = ("term", "band", "dates")


@dataclass(frozen=True)
class DiscourseEntity:
    id: str
    kind: str  # "report-period" | "fuzzy-period"
    term: str | None = None
    band: str | None = None
    start: date | None = None
    end: date | None = None
    avg_fd: float | None = None
    variable: str = ""
    message: FuzzyPeriodMessage | None = field(default=None, compare=False, repr=False)

    def feature(self, name: str):
        if name == "dates":
            return (self.start, self.end)
        return getattr(self, name)

    @classmethod
    def from_period(cls, m: FuzzyPeriodMessage, lex: Lexicon) -> "DiscourseEntity":
        return cls(
            id=m.key,
            kind="fuzzy-period",
            term=m.term.name,
            band=lex.band_for(m.avg_fd).name,
            start=m.start,
            end=m.end,
            avg_fd=m.avg_fd,
            variable=m.variable,
            message=m,
        )


def _valid(subset: Sequence[str]) -> bool:
    # A band is voiced through the term's banded word, so it needs the term.
    return "band" not in subset or "term" in subset


def feature_subsets() -> list[tuple[str, ...]]:
    subsets = []
    for k in range(len(FEATURES) + 1):
        subsets.extend(s for s in itertools.combinations(FEATURES, k) if _valid(s))
    return subsets


def matches(e: DiscourseEntity, features: Iterable[str], other: DiscourseEntity) -> bool:
    return other.kind == e.kind and all(other.feature(f) == e.feature(f) for f in features)


def resolve(e: DiscourseEntity, features: Iterable[str], context: Iterable[DiscourseEntity]) -> list[DiscourseEntity]:
    """Entities in ``context`` (plus ``e``) that an expression with ``features`` would match."""
    features = tuple(features)
    pool = {c.id: c for c in context}
    pool.setdefault(e.id, e)
    return [c for c in pool.values() if matches(e, features, c)]


def distinguishing_features(e: DiscourseEntity, context: Iterable[DiscourseEntity]) -> tuple[str, ...]:
    context = [c for c in context if c.id != e.id]
    for c in context:
        if c.kind == e.kind and all(c.feature(f) == e.feature(f) for f in FEATURES):
            raise AmbiguityError(f"entity {e.id!r} is indistinguishable from {c.id!r}")
    for subset in feature_subsets():
        if not any(matches(e, subset, c) for c in context):
            return subset
    raise AmbiguityError(f"no feature combination distinguishes {e.id!r}")


def introduction_context(e: DiscourseEntity, document: Iterable[DiscourseEntity], lex: Lexicon) -> list[DiscourseEntity]:
    """Document entities plus one hypothetical alternative per feature."""
    other_band = next(b.name for b in lex.bands if b.name != e.band)
    shift = timedelta(days=(e.end - e.start).days + 1)
    variants = [
        DiscourseEntity(f"{e.id}#term", e.kind, f"{e.term}#other", e.band, e.start, e.end),
        DiscourseEntity(f"{e.id}#band", e.kind, e.term, other_band, e.start, e.end),
        DiscourseEntity(f"{e.id}#dates", e.kind, e.term, e.band, e.start + shift, e.end + shift),
    ]
    return [*document, *variants]


def build_phrase(e: DiscourseEntity, features: Sequence[str], lex: Lexicon, definite: bool) -> NounPhrase:
    features = set(features)
    noun = lex.reference_noun
    pre: tuple[str, ...] = ()
    if "term" in features:
        if "band" in features and e.message is not None:
            word, noun = period_property(e.message, lex)
        elif "band" in features:
            word, noun = lex.word(e.variable, e.term, e.band), lex.band(e.band).noun
        else:
            word = lex.word(e.variable, e.term, lex.plain_band)
        pre = (word,)
    dates = (e.start, e.end) if "dates" in features else None
    if definite:
        determiner = "the" if features else "that"
    else:
        determiner = "a"
    return NounPhrase(noun, determiner, pre, dates=dates, entity=e.id, kind=e.kind)


@dataclass
class Mention:
    entity: str
    features: tuple[str, ...]
    definite: bool
    context: tuple[DiscourseEntity, ...]


class Discourse:
    """Document-scoped mention state; mutated in realization order."""

    def __init__(self, entities: Iterable[DiscourseEntity], lex: Lexicon):
        self.lex = lex
        self.entities: dict[str, DiscourseEntity] = {}
        for e in entities:
            if e.id in self.entities:
                raise AmbiguityError(f"duplicate entity id {e.id!r}")
            self.entities[e.id] = e
        self.mention_count: dict[str, int] = {i: 0 for i in self.entities}
        self.mention_count[REPORT_ENTITY] = 0
        self.log: list[Mention] = []

    @classmethod
    def from_periods(cls, periods: Iterable[FuzzyPeriodMessage], lex: Lexicon) -> "Discourse":
        return cls((DiscourseEntity.from_period(m, lex) for m in periods), lex)

    def refer(self, entity_id: str) -> NounPhrase:
        if entity_id == REPORT_ENTITY:
            self.mention_count[REPORT_ENTITY] += 1
            return report_subject(self.lex)
        if entity_id not in self.entities:
            raise AmbiguityError(f"entity {entity_id!r} is not registered in this document")
        e = self.entities[entity_id]
        first = self.mention_count[entity_id] == 0
        others = [c for c in self.entities.values() if c.id != e.id]
        if first:
            context = introduction_context(e, others, self.lex)
        else:
            context = [c for c in others if self.mention_count[c.id] > 0]
        phrase, features = describe(e, context, self.lex, definite=not first)
        self.mention_count[entity_id] += 1
        self.log.append(Mention(entity_id, features, not first, tuple(context)))
        return phrase


def describe(
    e: DiscourseEntity, context: Iterable[DiscourseEntity], lex: Lexicon, definite: bool = False
) -> tuple[NounPhrase, tuple[str, ...]]:
    """Noun phrase for ``e`` together with the feature set it uses."""
    if e.kind == "report-period":
        return report_subject(lex), ()
    features = distinguishing_features(e, context)
    return build_phrase(e, features, lex, definite), features


def refer(e: DiscourseEntity, context: Iterable[DiscourseEntity], lex: Lexicon, definite: bool = False) -> NounPhrase:
    return describe(e, context, lex, definite)[0]
