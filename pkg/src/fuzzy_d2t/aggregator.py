"""Sentence aggregation, structural and content-level.

Structural aggregation merges phrase specs that share their subject
("the period was predominantly cold and predominantly wet") and, when the
predicates also share their adverb, factors it out ("the period was
predominantly cold and wet"). Content-level aggregation instead builds one
conjunctive quantified statement "Q Xs are A and B" with a t-norm.
``compare_aggregation_paths`` runs both on the same data for inspection.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

from .content import QuantifiedTrendMessage
from .errors import AggregationError
from .fuzzy_core import Tnorm, tnorm_apply
from .knowledge_base import FuzzyKnowledgeBase, LinguisticTerm, Quantifier
from .lexicalizer import PhraseSpec, SpecNode, lexicalize_statement, lexicalize_trend
from .protoform import DataSeries, QuantifiedStatement, SelectionCriteria, TermRef, select_statements

MAX_CHAIN = 3


def _mergeable(p1: PhraseSpec, p2: PhraseSpec) -> bool:
    return (
        p1.subject == p2.subject
        and p1.verb == p2.verb
        and p1.tense == p2.tense
        and p1.modifiers == p2.modifiers
        and not p1.existential
        and not p2.existential
    )


def _check(p1: PhraseSpec, p2: PhraseSpec) -> None:
    if not _mergeable(p1, p2):
        raise AggregationError("phrase specs do not share subject, verb and tense")


def _merge_provenance(p1: PhraseSpec, p2: PhraseSpec) -> tuple[str, ...]:
    return tuple(dict.fromkeys(p1.provenance + p2.provenance))


def aggregate_shared_participant(p1: PhraseSpec, p2: PhraseSpec) -> PhraseSpec:
    _check(p1, p2)
    if p1.complement == p2.complement:
        return replace(p1, provenance=_merge_provenance(p1, p2))
    return replace(p1, complement=p1.complement + p2.complement, provenance=_merge_provenance(p1, p2))


def aggregate_shared_structure(p1: PhraseSpec, p2: PhraseSpec) -> PhraseSpec:
    """Factor a shared adverb; falls back to the shared-participant merge."""
    _check(p1, p2)
    preds = p1.complement + p2.complement
    frames = {(p.adverb, p.post) for p in preds}
    if len(frames) != 1:
        return aggregate_shared_participant(p1, p2)
    adverb, post = frames.pop()
    words = tuple(w for p in preds for w in p.words)
    merged = type(preds[0])(adverb, tuple(dict.fromkeys(words)), post)
    return replace(p1, complement=(merged,), provenance=_merge_provenance(p1, p2))


def aggregate_pair(p1: PhraseSpec, p2: PhraseSpec, structure: bool = True) -> PhraseSpec:
    return aggregate_shared_structure(p1, p2) if structure else aggregate_shared_participant(p1, p2)


def aggregate_paragraph(nodes: Sequence[SpecNode], structure: bool = True, max_chain: int = MAX_CHAIN) -> list[SpecNode]:
    """Merge runs of adjacent mergeable specs, at most ``max_chain`` per sentence.

    Relation nodes are left intact and act as barriers.
    """
    out: list[SpecNode] = []
    chain = 0
    for node in nodes:
        prev = out[-1] if out else None
        if (
            isinstance(node, PhraseSpec)
            and isinstance(prev, PhraseSpec)
            and chain < max_chain
            and _mergeable(prev, node)
        ):
            out[-1] = aggregate_pair(prev, node, structure)
            chain += 1
        else:
            out.append(node)
            chain = 1
    return out


# -- content-level aggregation -------------------------------------------------

def content_level_conjunction(
    q: Quantifier,
    a: tuple[LinguisticTerm, DataSeries],
    b: tuple[LinguisticTerm, DataSeries],
    t: Tnorm | str = Tnorm.MINIMUM,
) -> QuantifiedStatement:
    """``Q Xs are A and B`` with FD = mu_Q(mean_i T(mu_A(x_i), mu_B(y_i)))."""
    (ta, xa), (tb, xb) = a, b
    if xa.dates != xb.dates:
        raise AggregationError(f"series {xa.variable!r} and {xb.variable!r} are not aligned on identical dates")
    joint = math.fsum(tnorm_apply(t, ta.mf(x), tb.mf(y)) for x, y in zip(xa.values, xb.values)) / len(xa)
    return QuantifiedStatement(
        form="type1",
        quantifier=q,
        summarizer=TermRef(xa.variable, ta.name),
        conjunct=TermRef(xb.variable, tb.name),
        fd=q.mf(joint),
        coverage=q.coverage,
        summarizer_rank=ta.rank,
    )


def conjunctive_candidates(kb, a, b, t=Tnorm.MINIMUM) -> list[QuantifiedStatement]:
    return [content_level_conjunction(q, a, b, t) for q in kb.quantifiers]


def best_conjunction(kb, a, b, t=Tnorm.MINIMUM, criteria: SelectionCriteria | None = None) -> QuantifiedStatement:
    criteria = replace(criteria or SelectionCriteria(), max_size=1)
    return select_statements(conjunctive_candidates(kb, a, b, t), criteria)[0]


@dataclass(frozen=True)
class AggregationComparison:
    term_a: str
    term_b: str
    quantifier_structural: tuple[str, str]
    fd_a: float
    fd_b: float
    quantifier_content: str
    fd_conj: dict[str, float]
    sentence_structural: str
    sentence_content: str

    def record(self) -> dict:
        rec = {
            "term_a": self.term_a,
            "term_b": self.term_b,
            f"fd_{self.term_a}": self.fd_a,
            f"fd_{self.term_b}": self.fd_b,
            "quantifier_structural": list(self.quantifier_structural),
            "quantifier_content": self.quantifier_content,
        }
        for t, fd in self.fd_conj.items():
            rec[f"fd_conj_{t.replace('-', '_')}"] = fd
        rec["sentence_structural"] = self.sentence_structural
        rec["sentence_content"] = self.sentence_content
        return rec


def compare_aggregation_paths(
    kb: FuzzyKnowledgeBase,
    trend_a: QuantifiedTrendMessage,
    trend_b: QuantifiedTrendMessage,
    xs_a: DataSeries,
    xs_b: DataSeries,
    criteria: SelectionCriteria | None = None,
    mode: str = "default",
) -> AggregationComparison:
    """Realize the same two trends through both aggregation paths.

    The structural path aggregates the two lexicalized trend sentences. The
    content path conjoins the dominant terms of both trends, picks the
    quantifier under the minimum t-norm and reports that quantifier's FD
    under every t-norm. No equivalence between the paths is asserted.
    """
    from .realizer import realize_sentence

    lex = kb.lexicon
    dom_a, dom_b = trend_a.dominant, trend_b.dominant
    term_a = kb.term(dom_a.variable, dom_a.term)
    term_b = kb.term(dom_b.variable, dom_b.term)
    spec_a, spec_b = lexicalize_trend(trend_a, lex, mode), lexicalize_trend(trend_b, lex, mode)
    merged = aggregate_paragraph([spec_a, spec_b])
    structural = " ".join(realize_sentence(s) for s in merged)

    chosen = best_conjunction(kb, (term_a, xs_a), (term_b, xs_b), Tnorm.MINIMUM, criteria)
    fd_conj = {
        t.value: content_level_conjunction(chosen.quantifier, (term_a, xs_a), (term_b, xs_b), t).fd for t in Tnorm
    }
    content = realize_sentence(lexicalize_statement(chosen, lex))
    return AggregationComparison(
        term_a=dom_a.term,
        term_b=dom_b.term,
        quantifier_structural=(dom_a.quantifier.name, dom_b.quantifier.name),
        fd_a=dom_a.fd,
        fd_b=dom_b.fd,
        quantifier_content=chosen.quantifier.name,
        fd_conj=fd_conj,
        sentence_structural=structural,
        sentence_content=content,
    )
