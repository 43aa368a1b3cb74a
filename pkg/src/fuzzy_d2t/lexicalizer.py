"""Lexicalization: messages become phrase specifications.

Word choice depends on the fulfillment degree: the FD band of a period picks
the plain or hedged word, and a trend statement is voiced with
"predominantly" only when its quantifier and degree are both high enough.
Nothing here touches surface strings beyond choosing lexemes; agreement,
capitalization and date formatting belong to the realizer.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from datetime import date
from typing import Union

from .content import CountMessage, FuzzyPeriodMessage, Message, QuantifiedTrendMessage
from .document_planner import DiscourseRelation, DocumentPlan
from .errors import LexicalizationError
from .lexicon import Lexicon
from .protoform import QuantifiedStatement

REPORT_ENTITY = "report"
MODES = ("coverage", "specificity", "default")


@dataclass(frozen=True)
class NounPhrase:
    head: str
    determiner: str = ""
    premodifiers: tuple[str, ...] = ()
    postmodifiers: tuple[str, ...] = ()
    plural: bool = False
    dates: tuple[date, date] | None = None
    # Discourse entity this phrase refers to; the referring stage rewrites it.
    entity: str | None = None
    kind: str = ""  # "report-period" | "fuzzy-period" | "" for plain phrases


@dataclass(frozen=True)
class Predicate:
    """One conjoinable property: ``adverb word (and word)* post``."""

    adverb: str | None
    words: tuple[str, ...]
    post: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "words", tuple(self.words))
        if not self.words:
            raise LexicalizationError("a predicate needs at least one property word")


@dataclass(frozen=True)
class PhraseSpec:
    subject: NounPhrase
    verb: str = "be"
    tense: str = "past"
    complement: tuple[Predicate, ...] = ()
    modifiers: tuple[str, ...] = ()
    provenance: tuple[str, ...] = ()
    # "There was/were <subject>": the subject is the existential pivot.
    existential: bool = False

    def __post_init__(self):
        object.__setattr__(self, "complement", tuple(self.complement))
        object.__setattr__(self, "provenance", tuple(self.provenance))
        if not self.subject.head:
            raise LexicalizationError("phrase spec has an empty subject")
        if not self.verb:
            raise LexicalizationError("phrase spec has an empty verb")

    def content_words(self) -> list[str]:
        words = [w for p in self.complement for w in p.words]
        return words + [p.adverb for p in self.complement if p.adverb] + [p.post for p in self.complement if p.post]


@dataclass(frozen=True)
class RelationSpec:
    kind: str  # "contrast" | "emphasis"
    left: PhraseSpec
    right: PhraseSpec
    provenance: tuple[str, ...] = ()


SpecNode = Union[PhraseSpec, RelationSpec]


@dataclass(frozen=True)
class LexicalizedParagraph:
    role: str
    nodes: tuple[SpecNode, ...]


@dataclass(frozen=True)
class LexicalizedDocument:
    paragraphs: tuple[LexicalizedParagraph, ...]
    entities: tuple[FuzzyPeriodMessage, ...] = field(default=())

    def map_nodes(self, fn) -> "LexicalizedDocument":
        return replace(
            self,
            paragraphs=tuple(LexicalizedParagraph(p.role, tuple(fn(p.role, p.nodes))) for p in self.paragraphs),
        )


def report_subject(lex: Lexicon) -> NounPhrase:
    return NounPhrase(lex.report_noun, "the", entity=REPORT_ENTITY, kind="report-period")


# -- trends ------------------------------------------------------------------

def resolve_multi_quantifier(s1: QuantifiedStatement, s2: QuantifiedStatement, mode: str = "default", lex: Lexicon | None = None) -> str:
    """Quantifier name that voices two statements about the same term.

    ``coverage`` keeps the less specific quantifier (lower in the declared
    order), ``specificity`` the more specific one, and ``default`` replaces
    both with the lexicon's general hedge.
    """
    if mode not in MODES:
        raise LexicalizationError(f"unknown multi-quantifier mode {mode!r}")
    if s1.summarizer != s2.summarizer:
        raise LexicalizationError("multi-quantifier resolution needs statements about the same term")
    if s1.quantifier.name == s2.quantifier.name:
        return s1.quantifier.name
    low, high = sorted((s1.quantifier, s2.quantifier), key=lambda q: q.rank)
    if mode == "coverage":
        return low.name
    if mode == "specificity":
        return high.name
    return lex.general_hedge if lex is not None else "in general"


def _words(lex: Lexicon, s: QuantifiedStatement) -> tuple[str, ...]:
    words = [lex.word(s.variable, s.term)]
    if s.conjunct is not None:
        words.append(lex.word(s.conjunct.variable, s.conjunct.term))
    return tuple(words)


def _quantified(lex: Lexicon, quantifier: str, words: tuple[str, ...], provenance) -> PhraseSpec:
    phrase = lex.quantifier(quantifier).phrase
    return PhraseSpec(NounPhrase(phrase, plural=True), complement=(Predicate(None, words),), provenance=provenance)


def lexicalize_statement(s: QuantifiedStatement, lex: Lexicon, provenance=()) -> PhraseSpec:
    words = _words(lex, s)
    if s.quantifier.name in lex.predominant_quantifiers and s.fd >= lex.predominant_threshold:
        return PhraseSpec(report_subject(lex), complement=(Predicate(lex.predominant_adverb, words),), provenance=provenance)
    return _quantified(lex, s.quantifier.name, words, provenance)


def lexicalize_trend(m: QuantifiedTrendMessage, lex: Lexicon, mode: str = "default") -> PhraseSpec:
    prov = (m.key,)
    if len(m.statements) == 1:
        return lexicalize_statement(m.statements[0], lex, prov)
    if len(m.statements) > 2:
        raise LexicalizationError(f"cannot lexicalize a trend with {len(m.statements)} statements")
    s1, s2 = m.statements
    if s1.summarizer == s2.summarizer and s1.conjunct == s2.conjunct:
        choice = resolve_multi_quantifier(s1, s2, mode, lex)
        if choice == lex.general_hedge and s1.quantifier.name != s2.quantifier.name:
            return PhraseSpec(report_subject(lex), complement=(Predicate(None, _words(lex, s1), choice),), provenance=prov)
        return lexicalize_statement(replace(s1, quantifier=_pick(s1, s2, choice), fd=max(s1.fd, s2.fd)), lex, prov)
    # Different terms: "partly almost dry and partly wet", ordered by term.
    ordered = sorted(m.statements, key=lambda s: (s.summarizer_rank, s.order_key()))
    preds = tuple(Predicate(lex.quantifier(s.quantifier.name).adverb, _words(lex, s)) for s in ordered)
    return PhraseSpec(report_subject(lex), complement=preds, provenance=prov)


def _pick(s1, s2, name):
    return s1.quantifier if s1.quantifier.name == name else s2.quantifier


# -- periods and counts --------------------------------------------------------

def period_property(m: FuzzyPeriodMessage, lex: Lexicon) -> tuple[str, str]:
    """Property word and head noun for a fuzzy period, both chosen by FD band.

    In the hedged band an attached neighbouring term turns the word into a
    combined hedge such as "warm/coldish".
    """
    if m.avg_fd < 0.5:
        raise LexicalizationError(
            f"period {m.key} has average degree {m.avg_fd:.3f} below 0.5; content determination should have dropped it"
        )
    band = lex.band_for(m.avg_fd)
    if band.name == lex.hedged_band and m.adjacent:
        other = max(m.adjacent, key=lambda a: (a[1], a[0]))[0]
        word = f"{lex.word(m.variable, m.term.name, lex.plain_band)}/{lex.word(m.variable, other, lex.hedged_band)}"
    else:
        word = lex.word(m.variable, m.term.name, band.name)
    return word, band.noun


def period_phrase(m: FuzzyPeriodMessage, lex: Lexicon) -> NounPhrase:
    word, noun = period_property(m, lex)
    return NounPhrase(noun, "a", (word,), dates=(m.start, m.end), entity=m.key, kind="fuzzy-period")


def lexicalize_period(m: FuzzyPeriodMessage, lex: Lexicon) -> PhraseSpec:
    return PhraseSpec(period_phrase(m, lex), existential=True, provenance=(m.key,))


def lexicalize_count(m: CountMessage, lex: Lexicon) -> PhraseSpec:
    lexeme = lex.count(m.variable)
    if m.count == 1:
        np = NounPhrase(lexeme.singular, "1")
    else:
        np = NounPhrase(lexeme.plural, str(m.count) if m.count else "no", plural=True)
    return PhraseSpec(np, existential=True, provenance=(m.key,))


def lexicalize_message(m: Message, lex: Lexicon, mode: str = "default") -> PhraseSpec:
    if isinstance(m, QuantifiedTrendMessage):
        return lexicalize_trend(m, lex, mode)
    if isinstance(m, CountMessage):
        return lexicalize_count(m, lex)
    if isinstance(m, FuzzyPeriodMessage):
        return lexicalize_period(m, lex)
    raise LexicalizationError(f"cannot lexicalize {type(m).__name__}")


def lexicalize_plan(dp: DocumentPlan, lex: Lexicon, mode: str = "default") -> LexicalizedDocument:
    paragraphs = []
    entities = []
    for para in dp.paragraphs:
        nodes = []
        for node in para.nodes:
            if isinstance(node, DiscourseRelation):
                left = lexicalize_message(node.left, lex, mode)
                right = lexicalize_message(node.right, lex, mode)
                nodes.append(RelationSpec(node.kind, left, right, left.provenance + right.provenance))
                msgs = node.messages()
            else:
                nodes.append(lexicalize_message(node, lex, mode))
                msgs = (node,)
            entities.extend(m for m in msgs if isinstance(m, FuzzyPeriodMessage))
        paragraphs.append(LexicalizedParagraph(para.role, tuple(nodes)))
    return LexicalizedDocument(tuple(paragraphs), tuple(entities))
