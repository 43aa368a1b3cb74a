"""Document structuring: two-paragraph layout plus contrast/emphasis relations.

A relation between a trend and a period becomes a single plan node in the
general paragraph; the period no longer appears on its own, so every
content message is placed exactly once.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .content import ContentPlan, CountMessage, FuzzyPeriodMessage, Message, QuantifiedTrendMessage
from .fuzzy_core import TOL, Tnorm, tnorm_apply
from .knowledge_base import FuzzyKnowledgeBase

GENERAL = "general-information"
EXTENDED = "extended-information"


@dataclass(frozen=True)
class DiscourseRelation:
    kind: str  # "contrast" | "emphasis" | "sequence"
    left: Message
    right: Message
    strength: float

    def __post_init__(self):
        if self.kind not in ("contrast", "emphasis", "sequence"):
            raise ValueError(f"unknown relation kind {self.kind!r}")
        if not 0.0 <= self.strength <= 1.0:
            raise ValueError("relation strength must lie in [0, 1]")

    def messages(self) -> tuple[Message, Message]:
        return (self.left, self.right)


PlanNode = Union[Message, DiscourseRelation]


@dataclass(frozen=True)
class Paragraph:
    role: str
    nodes: tuple[PlanNode, ...]


@dataclass(frozen=True)
class DocumentPlan:
    paragraphs: tuple[Paragraph, ...]
    # Narrative order between consecutive period nodes; realized as plain sequence.
    sequences: tuple[DiscourseRelation, ...] = ()

    def messages(self) -> list[Message]:
        out: list[Message] = []
        for para in self.paragraphs:
            for node in para.nodes:
                out.extend(node.messages() if isinstance(node, DiscourseRelation) else [node])
        return out


def _term_distance(kb: FuzzyKnowledgeBase, variable: str, a: str, b: str) -> int:
    return kb.variable(variable).distance(a, b)


def detect_contrast(
    trend: QuantifiedTrendMessage,
    period: FuzzyPeriodMessage,
    kb: FuzzyKnowledgeBase,
    strength_tnorm: Tnorm | str = Tnorm.MINIMUM,
) -> DiscourseRelation | None:
    if trend.variable != period.variable:
        raise ValueError("contrast is only detected between messages of the same variable")
    var = kb.variable(trend.variable)
    dominant = trend.dominant
    a, b = dominant.term, period.term.name
    if var.are_antonyms(a, b) or var.distance(a, b) >= 2:
        return DiscourseRelation("contrast", trend, period, tnorm_apply(strength_tnorm, dominant.fd, period.avg_fd))
    return None


def detect_emphasis(
    trend: QuantifiedTrendMessage,
    sub_message: FuzzyPeriodMessage,
    kb: FuzzyKnowledgeBase,
    strength_tnorm: Tnorm | str = Tnorm.MINIMUM,
) -> DiscourseRelation | None:
    if trend.variable != sub_message.variable:
        raise ValueError("emphasis is only detected between messages of the same variable")
    if detect_contrast(trend, sub_message, kb) is not None:
        return None
    dominant = trend.dominant
    term = sub_message.term
    if term.name != dominant.term and term.intensifies != dominant.term:
        return None
    if sub_message.avg_fd < dominant.fd - TOL:
        return None
    return DiscourseRelation("emphasis", trend, sub_message, tnorm_apply(strength_tnorm, dominant.fd, sub_message.avg_fd))


def _var_index(cp: ContentPlan, variable: str) -> int:
    order = cp.variable_order
    return order.index(variable) if variable in order else len(order)


def _general_key(cp: ContentPlan, m: Message):
    kind = 0 if isinstance(m, QuantifiedTrendMessage) else 1
    return (kind, _var_index(cp, m.variable), m.variable)


def _period_key(cp: ContentPlan, m: FuzzyPeriodMessage):
    return (m.start, m.end, _var_index(cp, m.variable), m.variable, m.term.rank, m.term.name)


def plan_document(
    cp: ContentPlan,
    kb: FuzzyKnowledgeBase | None = None,
    *,
    relations: bool = True,
    strength_tnorm: Tnorm | str = Tnorm.MINIMUM,
) -> DocumentPlan:
    """Order messages into the general and extended paragraphs.

    Relation detection needs the knowledge base; without one, or with
    ``relations=False``, the plan is purely positional.
    """
    messages = cp.messages()
    general = sorted(
        (m for m in messages if isinstance(m, (QuantifiedTrendMessage, CountMessage))),
        key=lambda m: _general_key(cp, m),
    )
    periods = sorted((m for m in messages if isinstance(m, FuzzyPeriodMessage)), key=lambda m: _period_key(cp, m))

    general_nodes: list[PlanNode] = list(general)
    if relations and kb is not None:
        used: set[str] = set()
        for i, node in enumerate(general_nodes):
            if not isinstance(node, QuantifiedTrendMessage):
                continue
            found = []
            for p in periods:
                if p.variable != node.variable or p.key in used:
                    continue
                rel = detect_contrast(node, p, kb, strength_tnorm) or detect_emphasis(node, p, kb, strength_tnorm)
                if rel is not None:
                    found.append(rel)
            if found:
                # Contrast first, then the strongest, then the earliest.
                best = min(found, key=lambda r: (r.kind != "contrast", -round(r.strength, 9), _period_key(cp, r.right)))
                general_nodes[i] = best
                used.add(best.right.key)
        periods = [p for p in periods if p.key not in used]

    sequences = tuple(DiscourseRelation("sequence", a, b, 1.0) for a, b in zip(periods, periods[1:]))
    return DocumentPlan(
        (Paragraph(GENERAL, tuple(general_nodes)), Paragraph(EXTENDED, tuple(periods))),
        sequences,
    )
