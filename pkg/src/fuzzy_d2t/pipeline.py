"""End-to-end orchestration of the report pipeline.

Stages run in a fixed order and hand each other only typed values:
content determination, document structuring, lexicalization, aggregation,
referring expression generation, realization. Any package error raised
inside a stage is tagged with the stage name so callers can report where
the run failed.
"""
from __future__ import annotations

import contextlib
import dataclasses
import enum
import json
import sys
from dataclasses import dataclass, field, replace
from datetime import date
from pathlib import Path
from typing import Any, Mapping

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .aggregator import AggregationComparison, aggregate_paragraph, best_conjunction, compare_aggregation_paths
from .content import ContentConfig, ContentPlan, CrispCondition, QuantifiedTrendMessage, determine_content
from .document_planner import DocumentPlan, plan_document
from .errors import ConfigError, D2TError
from .fuzzy_core import Tnorm
from .ingestion import ObservationTable
from .knowledge_base import FuzzyKnowledgeBase
from .lexicalizer import MODES, LexicalizedDocument, NounPhrase, PhraseSpec, RelationSpec, lexicalize_plan
from .protoform import SelectionCriteria
from .realizer import realize_document
from .referring import Discourse, Mention

STAGES = (
    "content determination",
    "document structuring",
    "lexicalization",
    "aggregation",
    "referring expression generation",
    "realization",
)
AGGREGATION_MODES = ("structural", "content", "both", "none")


@dataclass(frozen=True)
class PipelineConfig:
    content: ContentConfig = field(default_factory=ContentConfig)
    aggregation: str = "structural"
    mode: str = "default"
    fmt: str = "text"
    relations: bool = True
    strength_tnorm: Tnorm = Tnorm.MINIMUM
    content_tnorm: Tnorm = Tnorm.MINIMUM

    def __post_init__(self):
        if self.aggregation not in AGGREGATION_MODES:
            raise ConfigError(f"aggregation must be one of {AGGREGATION_MODES}, got {self.aggregation!r}")
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.fmt not in ("text", "html"):
            raise ConfigError(f"format must be 'text' or 'html', got {self.fmt!r}")


@dataclass
class PipelineResult:
    content_plan: ContentPlan
    document_plan: DocumentPlan
    lexicalized: LexicalizedDocument
    aggregated: LexicalizedDocument
    referred: LexicalizedDocument
    report: str
    mentions: list[Mention]
    comparison: AggregationComparison | None = None


@contextlib.contextmanager
def stage(name: str):
    try:
        yield
    except D2TError as exc:
        if getattr(exc, "stage", None) is None:
            exc.stage = name
        raise


# -- configuration ---------------------------------------------------------------

_CONTENT_KEYS = {
    "trend_variables": tuple,
    "count_variable": str,
    "period_variables": tuple,
    "min_len": int,
    "fd_floor": float,
    "adjacent_threshold": float,
    "deviations_only": bool,
    "deviation_fd": float,
}
_CRITERIA_KEYS = {"fd_threshold": float, "coverage_target": float, "tie_break": str, "max_size": int}


def _coerce(value, kind, where):
    if kind is tuple and isinstance(value, list) and all(isinstance(v, str) for v in value):
        return tuple(value)
    if kind is float and isinstance(value, int) and not isinstance(value, bool):
        return float(value)
    if isinstance(value, kind) and not (kind is int and isinstance(value, bool)):
        return value
    raise ConfigError(f"{where}: expected {kind.__name__}")


def _pick(raw: Mapping[str, Any], keys: Mapping[str, type], section: str) -> dict:
    unknown = set(raw) - set(keys)
    if unknown:
        raise ConfigError(f"[{section}] unknown keys: {sorted(unknown)}")
    return {k: _coerce(v, keys[k], f"{section}.{k}") for k, v in raw.items()}


def parse_config(text: str, base: PipelineConfig | None = None) -> PipelineConfig:
    """Pipeline configuration from TOML with optional ``[content]``,
    ``[selection]``, ``[count]`` and ``[pipeline]`` tables."""
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"malformed configuration: {exc}") from None
    unknown = set(raw) - {"content", "selection", "count", "period_terms", "pipeline"}
    if unknown:
        raise ConfigError(f"unknown configuration tables: {sorted(unknown)}")
    base = base or PipelineConfig()
    content = base.content
    try:
        criteria = replace(content.criteria, **_pick(raw.get("selection", {}), _CRITERIA_KEYS, "selection"))
        content_kw = _pick(raw.get("content", {}), _CONTENT_KEYS, "content")
        if "count" in raw:
            count = _pick(raw["count"], {"op": str, "threshold": float}, "count")
            content_kw["count_condition"] = CrispCondition(**count)
        if "period_terms" in raw:
            content_kw["period_terms"] = {
                v: _coerce(ts, tuple, f"period_terms.{v}") for v, ts in raw["period_terms"].items()
            }
        content = replace(content, criteria=criteria, **content_kw)
        pipe = _pick(
            raw.get("pipeline", {}),
            {"aggregation": str, "mode": str, "format": str, "relations": bool, "strength_tnorm": str, "content_tnorm": str},
            "pipeline",
        )
        if "format" in pipe:
            pipe["fmt"] = pipe.pop("format")
        for key in ("strength_tnorm", "content_tnorm"):
            if key in pipe:
                pipe[key] = Tnorm(pipe[key])
        return replace(base, content=content, **pipe)
    except ValueError as exc:
        if isinstance(exc, D2TError):
            raise
        raise ConfigError(str(exc)) from None


def load_config(path: str | Path, base: PipelineConfig | None = None) -> PipelineConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    return parse_config(text, base)


def validate_config(kb: FuzzyKnowledgeBase, config: PipelineConfig, table: ObservationTable | None = None) -> None:
    """Every variable and term the configuration mentions must exist."""
    c = config.content
    if kb.lexicon is None:
        raise ConfigError("knowledge base has no [lexicon]; reports cannot be worded")
    for v in c.required_variables():
        if v not in kb.variables:
            raise ConfigError(f"configured variable {v!r} is not defined in the knowledge base")
        if table is not None and v not in table.columns:
            raise ConfigError(f"configured variable {v!r} has no column in the observations")
    for v, terms in c.period_terms.items():
        if v not in c.period_variables:
            raise ConfigError(f"period_terms names {v!r}, which is not a period variable")
        known = kb.variable(v).term_names()
        for t in terms:
            if t not in known:
                raise ConfigError(f"configured term {t!r} is not a term of {v!r}")
    if c.count_variable not in kb.lexicon.counts:
        raise ConfigError(f"lexicon has no count phrase for {c.count_variable!r}")
    if config.aggregation in ("content", "both") and len(c.trend_variables) < 2:
        raise ConfigError("content-level aggregation needs two trend variables")


# -- stages ----------------------------------------------------------------------

def _conjoin_trends(kb, table, cp: ContentPlan, config: PipelineConfig) -> ContentPlan:
    """Replace the first two trend messages by one conjunctive statement."""
    trends = [m for m in cp.general if isinstance(m, QuantifiedTrendMessage)]
    a, b = trends[0], trends[1]
    ta = kb.term(a.variable, a.dominant.term)
    tb = kb.term(b.variable, b.dominant.term)
    stmt = best_conjunction(
        kb, (ta, table.series(a.variable)), (tb, table.series(b.variable)), config.content_tnorm, config.content.criteria
    )
    general = []
    for m in cp.general:
        if m is a:
            general.append(QuantifiedTrendMessage(a.variable, (stmt,)))
        elif m is not b:
            general.append(m)
    return replace(cp, general=tuple(general))


def _apply_referring(doc: LexicalizedDocument, discourse: Discourse) -> LexicalizedDocument:
    def np(phrase: NounPhrase) -> NounPhrase:
        return discourse.refer(phrase.entity) if phrase.entity is not None else phrase

    def spec(s: PhraseSpec) -> PhraseSpec:
        return replace(s, subject=np(s.subject))

    def nodes(_role, items):
        out = []
        for n in items:
            if isinstance(n, RelationSpec):
                out.append(replace(n, left=spec(n.left), right=spec(n.right)))
            else:
                out.append(spec(n))
        return out

    return doc.map_nodes(nodes)


def run_pipeline(
    kb: FuzzyKnowledgeBase, table: ObservationTable, config: PipelineConfig | None = None
) -> PipelineResult:
    config = config or PipelineConfig()
    with stage("configuration"):
        validate_config(kb, config, table)
    lex = kb.lexicon

    with stage("content determination"):
        cp = determine_content(kb, table, config.content)
        content_cp = _conjoin_trends(kb, table, cp, config) if config.aggregation == "content" else cp
    with stage("document structuring"):
        dp = plan_document(content_cp, kb, relations=config.relations, strength_tnorm=config.strength_tnorm)
    with stage("lexicalization"):
        lexd = lexicalize_plan(dp, lex, config.mode)
    comparison = None
    with stage("aggregation"):
        if config.aggregation == "none":
            agg = lexd
        else:
            agg = lexd.map_nodes(lambda _role, nodes: aggregate_paragraph(nodes))
        if config.aggregation == "both":
            trends = [m for m in cp.general if isinstance(m, QuantifiedTrendMessage)]
            comparison = compare_aggregation_paths(
                kb, trends[0], trends[1],
                table.series(trends[0].variable), table.series(trends[1].variable),
                config.content.criteria, config.mode,
            )
    with stage("referring expression generation"):
        discourse = Discourse.from_periods(lexd.entities, lex)
        referred = _apply_referring(agg, discourse)
    with stage("realization"):
        report = realize_document(referred, config.fmt, lex)
    return PipelineResult(cp, dp, lexd, agg, referred, report, discourse.log, comparison)


# -- tracing -----------------------------------------------------------------------

def to_jsonable(value: Any) -> Any:
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        out = {"_type": type(value).__name__}
        for f in dataclasses.fields(value):
            if f.repr:
                out[f.name] = to_jsonable(getattr(value, f.name))
        return out
    if isinstance(value, enum.Enum):
        return value.value
    if isinstance(value, date):
        return value.isoformat()
    if isinstance(value, Mapping):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    return value


def trace(result: PipelineResult) -> str:
    """Intermediate representations of one run as JSON text."""
    payload = {
        "content_plan": to_jsonable(result.content_plan),
        "document_plan": to_jsonable(result.document_plan),
        "phrase_specs": to_jsonable(result.lexicalized),
        "aggregated": to_jsonable(result.aggregated),
        "referred": to_jsonable(result.referred),
    }
    return json.dumps(payload, indent=2, sort_keys=False)
