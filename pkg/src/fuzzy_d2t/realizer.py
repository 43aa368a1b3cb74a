"""Template realization of phrase specs into English text or simple HTML."""
from __future__ import annotations

import html
import re
from datetime import date
from typing import Callable, Sequence

from .document_planner import EXTENDED
from .errors import RealizationError
from .lexicalizer import LexicalizedDocument, NounPhrase, PhraseSpec, Predicate, RelationSpec, SpecNode
from .lexicon import Lexicon

MONTHS = (
    "January", "February", "March", "April", "May", "June",
    "July", "August", "September", "October", "November", "December",
)

_UNMAPPED = re.compile(r"[<>{}\[\]#]|\bNone\b")


def ordinal(n: int) -> str:
    if 10 <= n % 100 <= 20:
        suffix = "th"
    else:
        suffix = {1: "st", 2: "nd", 3: "rd"}.get(n % 10, "th")
    return f"{n}{suffix}"


def render_date(d: date, with_year: bool = False) -> str:
    text = f"the {ordinal(d.day)} of {MONTHS[d.month - 1]}"
    return f"{text} {d.year}" if with_year else text


def render_date_range(start: date, end: date) -> str:
    """"from the 2nd to the 6th of January", widening only as far as needed."""
    if start == end:
        return f"on {render_date(start)}"
    if start.year != end.year:
        return f"from {render_date(start, True)} to {render_date(end, True)}"
    if start.month != end.month:
        return f"from {render_date(start)} to {render_date(end)}"
    return f"from the {ordinal(start.day)} to {render_date(end)}"


def conjoin(items: Sequence[str]) -> str:
    items = [i for i in items if i]
    if not items:
        return ""
    if len(items) == 1:
        return items[0]
    return f"{', '.join(items[:-1])} and {items[-1]}"


def _article(determiner: str, next_word: str) -> str:
    if determiner == "a" and next_word[:1].lower() in "aeiou":
        return "an"
    return determiner


def realize_np(np: NounPhrase) -> str:
    words = [*np.premodifiers, np.head]
    parts = []
    if np.determiner:
        parts.append(_article(np.determiner, words[0]))
    parts.extend(words)
    parts.extend(np.postmodifiers)
    if np.dates is not None:
        parts.append(render_date_range(*np.dates))
    return " ".join(p for p in parts if p)


def _check_word(word: str) -> str:
    if not word or _UNMAPPED.search(word):
        raise RealizationError(f"unmapped lexeme {word!r}")
    return word


def realize_predicate(p: Predicate) -> str:
    text = conjoin([_check_word(w) for w in p.words])
    if p.adverb:
        text = f"{p.adverb} {text}"
    if p.post:
        text = f"{text} {p.post}"
    return text


def _be(plural: bool, tense: str) -> str:
    if tense == "past":
        return "were" if plural else "was"
    if tense == "present":
        return "are" if plural else "is"
    raise RealizationError(f"unsupported tense {tense!r}")


def _verb(spec: PhraseSpec, plural: bool) -> str:
    if spec.verb != "be":
        raise RealizationError(f"no template for verb {spec.verb!r}")
    return _be(plural, spec.tense)


NpRenderer = Callable[[NounPhrase], str]


def realize_clause(spec: PhraseSpec, render_np: NpRenderer = realize_np) -> str:
    """Uncapitalized clause without terminal punctuation."""
    verb = _verb(spec, spec.subject.plural)
    if spec.existential:
        parts = ["there", verb, render_np(spec.subject)]
    else:
        if not spec.complement:
            raise RealizationError("phrase spec has an empty complement")
        parts = [render_np(spec.subject), verb, conjoin([realize_predicate(p) for p in spec.complement])]
    parts.extend(spec.modifiers)
    text = " ".join(parts)
    if "  " in text:
        raise RealizationError(f"malformed clause {text!r}")
    return text


_FIRST_LETTER = re.compile(r"^((?:<[^>]+>)*)(\w)")


def _sentence(clause: str) -> str:
    return _FIRST_LETTER.sub(lambda m: m.group(1) + m.group(2).upper(), clause, count=1) + "."


def realize_sentence(p: PhraseSpec, render_np: NpRenderer = realize_np) -> str:
    return _sentence(realize_clause(p, render_np))


def realize_relation(r: RelationSpec, render_np: NpRenderer = realize_np) -> str:
    left = realize_clause(r.left, render_np)
    if r.kind == "contrast":
        return _sentence(f"{left}, but {realize_clause(r.right, render_np)}")
    if r.kind == "emphasis":
        if r.right.existential:
            return _sentence(f"{left}, especially during {render_np(r.right.subject)}")
        return _sentence(f"{left}, especially {realize_clause(r.right, render_np)}")
    raise RealizationError(f"no template for relation {r.kind!r}")


def realize_node(node: SpecNode, render_np: NpRenderer = realize_np) -> str:
    if isinstance(node, RelationSpec):
        return realize_relation(node, render_np)
    return realize_sentence(node, render_np)


def _html_np(np: NounPhrase) -> str:
    # Plain phrases are escaped later together with the rest of the sentence.
    if np.kind == "fuzzy-period":
        return f"<em>{html.escape(realize_np(np), quote=False)}</em>"
    return realize_np(np)


def realize_document(doc: LexicalizedDocument, fmt: str = "text", lex: Lexicon | None = None) -> str:
    """Paragraphs as blank-line separated text or as ``<p>`` elements.

    An empty extended paragraph is replaced by the lexicon's fallback
    sentence, so the report always keeps its two-part shape.
    """
    if fmt not in ("text", "html"):
        raise RealizationError(f"unknown output format {fmt!r}")
    fallback = lex.no_periods if lex is not None else "No remarkable periods were registered."
    paragraphs = []
    for para in doc.paragraphs:
        if fmt == "html":
            # Escape everything except the emphasis tags inserted around noun phrases.
            sentences = [_escape_outside_tags(realize_node(n, _html_np)) for n in para.nodes]
        else:
            sentences = [realize_node(n) for n in para.nodes]
        if not sentences and para.role == EXTENDED:
            sentences = [html.escape(fallback, quote=False) if fmt == "html" else fallback]
        if not sentences:
            continue
        paragraphs.append(" ".join(sentences))
    if fmt == "html":
        return "".join(f"<p>{p}</p>\n" for p in paragraphs)
    return "\n\n".join(paragraphs) + "\n"


_TAG = re.compile(r"(</?em>)")


def _escape_outside_tags(text: str) -> str:
    # Text inside <em> was escaped when it was wrapped.
    out = []
    inside = False
    for piece in _TAG.split(text):
        if piece == "<em>":
            inside = True
            out.append(piece)
        elif piece == "</em>":
            inside = False
            out.append(piece)
        else:
            out.append(piece if inside else html.escape(piece, quote=False))
    return "".join(out)
