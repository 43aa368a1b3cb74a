"""Lexicon data: FD bands, term words per band, quantifier phrases.

The lexicon ships inside the knowledge-base file under ``[lexicon]`` and is
parsed here; cross-checks against the KB terms live in
:mod:`fuzzy_d2t.knowledge_base`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping

from .errors import DomainError, KBParseError, KBValidationError, LexiconMissError


@dataclass(frozen=True)
class FdBand:
    name: str
    lower: float
    upper: float
    lower_closed: bool
    upper_closed: bool
    noun: str

    def contains(self, fd: float) -> bool:
        above = fd >= self.lower if self.lower_closed else fd > self.lower
        below = fd <= self.upper if self.upper_closed else fd < self.upper
        return above and below


@dataclass(frozen=True)
class QuantifierLexeme:
    phrase: str  # subject NP, e.g. "most of the days"
    adverb: str  # predicate adverb, e.g. "mostly"


@dataclass(frozen=True)
class CountLexeme:
    singular: str
    plural: str


@dataclass(frozen=True)
class Lexicon:
    bands: tuple[FdBand, ...]
    # variable -> term -> band name -> word
    terms: Mapping[str, Mapping[str, Mapping[str, str]]]
    quantifiers: Mapping[str, QuantifierLexeme]
    counts: Mapping[str, CountLexeme] = field(default_factory=dict)
    predominant_quantifiers: tuple[str, ...] = ("most", "nearly all")
    predominant_adverb: str = "predominantly"
    predominant_threshold: float = 0.8
    general_hedge: str = "in general"
    plain_band: str = "plain"
    hedged_band: str = "hedged"
    reference_noun: str = "interval"
    report_noun: str = "period"
    no_periods: str = "No remarkable periods were registered."

    def band_for(self, fd: float) -> FdBand:
        for band in self.bands:
            if band.contains(fd):
                return band
        raise DomainError(f"no FD band contains {fd!r}")

    def band(self, name: str) -> FdBand:
        for band in self.bands:
            if band.name == name:
                return band
        raise LexiconMissError(f"unknown FD band {name!r}")

    def word(self, variable: str, term: str, band: str | None = None) -> str:
        band = band or self.plain_band
        try:
            return self.terms[variable][term][band]
        except KeyError:
            raise LexiconMissError(f"no word for {variable}/{term} in band {band!r}") from None

    def quantifier(self, name: str) -> QuantifierLexeme:
        try:
            return self.quantifiers[name]
        except KeyError:
            raise LexiconMissError(f"no lexeme for quantifier {name!r}") from None

    def count(self, variable: str) -> CountLexeme:
        try:
            return self.counts[variable]
        except KeyError:
            raise LexiconMissError(f"no count phrase for variable {variable!r}") from None


def _validate_bands(bands: tuple[FdBand, ...]) -> None:
    if not bands:
        raise KBValidationError("lexicon declares no FD bands")
    ordered = sorted(bands, key=lambda b: b.lower)
    if list(ordered) != list(bands):
        raise KBValidationError("lexicon FD bands must be declared in increasing order")
    first, last = bands[0], bands[-1]
    if first.lower != 0.0 or first.lower_closed:
        raise KBValidationError("FD bands must start at an open lower bound of 0")
    if last.upper != 1.0 or not last.upper_closed:
        raise KBValidationError("FD bands must end at a closed upper bound of 1")
    for left, right in zip(bands, bands[1:]):
        if left.upper != right.lower:
            raise KBValidationError(f"FD bands {left.name!r} and {right.name!r} leave a gap or overlap")
        if left.upper_closed == right.lower_closed:
            raise KBValidationError(
                f"boundary {left.upper} must belong to exactly one of {left.name!r}, {right.name!r}"
            )
    for band in bands:
        if band.lower >= band.upper:
            raise KBValidationError(f"FD band {band.name!r} is empty")


def _expect(mapping: Mapping[str, Any], key: str, kind, where: str):
    if key not in mapping:
        raise KBParseError(f"{where}: missing field {key!r}")
    value = mapping[key]
    if kind is float and isinstance(value, int) and not isinstance(value, bool):
        value = float(value)
    if not isinstance(value, kind):
        raise KBParseError(f"{where}.{key}: expected {getattr(kind, '__name__', kind)}")
    return value


def parse_lexicon(raw: Mapping[str, Any]) -> Lexicon:
    where = "lexicon"
    bands = []
    for i, b in enumerate(_expect(raw, "bands", list, where)):
        w = f"{where}.bands[{i}]"
        bands.append(FdBand(
            name=_expect(b, "name", str, w),
            lower=_expect(b, "lower", float, w),
            upper=_expect(b, "upper", float, w),
            lower_closed=bool(b.get("lower_closed", False)),
            upper_closed=bool(b.get("upper_closed", True)),
            noun=_expect(b, "noun", str, w),
        ))
    bands = tuple(bands)
    _validate_bands(bands)

    terms: dict[str, dict[str, dict[str, str]]] = {}
    for var, entries in _expect(raw, "terms", dict, where).items():
        terms[var] = {}
        for term, words in entries.items():
            if not isinstance(words, dict) or not all(isinstance(v, str) for v in words.values()):
                raise KBParseError(f"{where}.terms.{var}.{term}: expected a table of band -> word")
            terms[var][term] = dict(words)

    quantifiers = {}
    for name, entry in _expect(raw, "quantifiers", dict, where).items():
        w = f"{where}.quantifiers.{name}"
        quantifiers[name] = QuantifierLexeme(
            phrase=_expect(entry, "phrase", str, w), adverb=_expect(entry, "adverb", str, w)
        )

    counts = {}
    for var, entry in raw.get("counts", {}).items():
        w = f"{where}.counts.{var}"
        counts[var] = CountLexeme(_expect(entry, "singular", str, w), _expect(entry, "plural", str, w))

    optional = {
        k: raw[k]
        for k in (
            "predominant_adverb", "general_hedge", "plain_band", "hedged_band",
            "reference_noun", "report_noun", "no_periods",
        )
        if k in raw
    }
    if "predominant_quantifiers" in raw:
        optional["predominant_quantifiers"] = tuple(raw["predominant_quantifiers"])
    if "predominant_threshold" in raw:
        optional["predominant_threshold"] = float(raw["predominant_threshold"])
    lex = Lexicon(bands=bands, terms=terms, quantifiers=quantifiers, counts=counts, **optional)
    names = {b.name for b in bands}
    for required in (lex.plain_band, lex.hedged_band):
        if required not in names:
            raise KBValidationError(f"lexicon band {required!r} is not declared")
    if not 0.0 < lex.predominant_threshold <= 1.0:
        raise KBValidationError("lexicon.predominant_threshold must lie in (0, 1]")
    return lex
