"""Fuzzy knowledge base: linguistic variables, quantifiers and the lexicon.

The on-disk format is TOML; ``docs/kb_format.md`` documents the schema.
"""
from __future__ import annotations

import functools
import re
import sys
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Mapping

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import KBParseError, KBValidationError
from .fuzzy_core import MembershipFunction
from .lexicon import Lexicon, parse_lexicon

SCHEMA_VERSION = 1
PARTITION_EPS = 1e-6


@dataclass(frozen=True)
class LinguisticTerm:
    name: str
    mf: MembershipFunction
    antonym: str | None = None
    intensifies: str | None = None
    rank: int = 0  # position in the variable's declared term order
    variable: str = ""

    def __call__(self, x: float) -> float:
        return self.mf(x)


@dataclass(frozen=True)
class LinguisticVariable:
    name: str
    unit: str
    domain: tuple[float, float]
    terms: tuple[LinguisticTerm, ...]
    partition: bool = False

    def term(self, name: str) -> LinguisticTerm:
        for t in self.terms:
            if t.name == name:
                return t
        raise KeyError(f"variable {self.name!r} has no term {name!r}")

    def term_names(self) -> list[str]:
        return [t.name for t in self.terms]

    def distance(self, a: str, b: str) -> int:
        """Positional distance between two terms in the declared order."""
        return abs(self.term(a).rank - self.term(b).rank)

    def are_antonyms(self, a: str, b: str) -> bool:
        return self.term(a).antonym == b or self.term(b).antonym == a


@dataclass(frozen=True)
class Quantifier:
    name: str
    mf: MembershipFunction
    rank: int = 0

    @property
    def coverage(self) -> float:
        return coverage_of(self)

    def __call__(self, proportion: float) -> float:
        return self.mf(proportion)


def coverage_of(q: Quantifier) -> float:
    """Midpoint of the quantifier core."""
    return (q.mf.b + q.mf.c) / 2.0


@dataclass(frozen=True)
class FuzzyKnowledgeBase:
    variables: dict[str, LinguisticVariable]
    quantifiers: tuple[Quantifier, ...]
    lexicon: Lexicon | None = None
    schema_version: int = SCHEMA_VERSION
    quantifier_partition: bool = False
    variable_order: tuple[str, ...] = field(default=())

    def variable(self, name: str) -> LinguisticVariable:
        try:
            return self.variables[name]
        except KeyError:
            raise KBValidationError(f"unknown variable {name!r}") from None

    def quantifier(self, name: str) -> Quantifier:
        for q in self.quantifiers:
            if q.name == name:
                return q
        raise KBValidationError(f"unknown quantifier {name!r}")

    def term(self, variable: str, name: str) -> LinguisticTerm:
        var = self.variable(variable)
        try:
            return var.term(name)
        except KeyError as exc:
            raise KBValidationError(str(exc.args[0])) from None


# -- parsing -----------------------------------------------------------------

_TOML_POS = re.compile(r"\(at line (\d+), column (\d+)\)")


def _req(table: Mapping[str, Any], key: str, kind, where: str):
    if not isinstance(table, Mapping):
        raise KBParseError(f"{where}: expected a table")
    if key not in table:
        raise KBParseError(f"{where}: missing field {key!r}")
    value = table[key]
    if kind is float and isinstance(value, int) and not isinstance(value, bool):
        value = float(value)
    if not isinstance(value, kind):
        raise KBParseError(f"{where}.{key}: expected {kind.__name__}, got {type(value).__name__}")
    return value


def _numbers(value: Any, n: int, where: str) -> tuple[float, ...]:
    if not isinstance(value, list) or len(value) != n or not all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in value
    ):
        raise KBParseError(f"{where}: expected a list of {n} numbers")
    return tuple(float(v) for v in value)


def _mf(value: Any, where: str) -> MembershipFunction:
    a, b, c, d = _numbers(value, 4, where)
    try:
        return MembershipFunction(a, b, c, d)
    except ValueError as exc:
        raise KBValidationError(f"{where}: {exc}") from None


def _sample_points(mfs, lo: float, hi: float) -> list[float]:
    # The membership sum is piecewise linear between breakpoints, so checking
    # breakpoints, points just beside them and midpoints bounds it from below.
    cuts = sorted({lo, hi, *(p for f in mfs for p in f.as_list() if lo <= p <= hi)})
    delta = (hi - lo) * 1e-9
    points = set(cuts)
    for left, right in zip(cuts, cuts[1:]):
        points.update((left + delta, (left + right) / 2, right - delta))
    return sorted(points)


def _check_covers(mfs, lo: float, hi: float) -> float | None:
    """Return the first x in [lo, hi] whose membership sum is below 1, if any."""
    for x in _sample_points(mfs, lo, hi):
        if sum(f(x) for f in mfs) < 1.0 - PARTITION_EPS:
            return x
    return None


def _parse_variable(raw: Mapping[str, Any], where: str) -> LinguisticVariable:
    name = _req(raw, "name", str, where)
    where = f"variables.{name}"
    unit = _req(raw, "unit", str, where)
    lo, hi = _numbers(_req(raw, "domain", list, where), 2, f"{where}.domain")
    if not lo < hi:
        raise KBValidationError(f"{where}.domain: lower bound must be below upper bound")
    terms = []
    for i, t in enumerate(_req(raw, "terms", list, where)):
        tw = f"{where}.terms[{i}]"
        tname = _req(t, "name", str, tw)
        antonym = t.get("antonym")
        intensifies = t.get("intensifies")
        for key, val in (("antonym", antonym), ("intensifies", intensifies)):
            if val is not None and not isinstance(val, str):
                raise KBParseError(f"{tw}.{key}: expected str")
        mf = _mf(_req(t, "mf", list, tw), f"{tw}.mf")
        terms.append(LinguisticTerm(tname, mf, antonym, intensifies, rank=i, variable=name))
    var = LinguisticVariable(name, unit, (lo, hi), tuple(terms), bool(raw.get("partition", False)))
    _validate_variable(var)
    return var


def _validate_variable(var: LinguisticVariable) -> None:
    where = f"variables.{var.name}"
    if not var.terms:
        raise KBValidationError(f"{where}: declares no terms")
    names = var.term_names()
    if len(set(names)) != len(names):
        raise KBValidationError(f"{where}: term names are not unique")
    for t in var.terms:
        for key in ("antonym", "intensifies"):
            ref = getattr(t, key)
            if ref is not None and ref not in names:
                raise KBValidationError(f"{where}.{t.name}: {key} {ref!r} is not a term of {var.name!r}")
            if ref == t.name:
                raise KBValidationError(f"{where}.{t.name}: {key} refers to itself")
        if t.intensifies is not None:
            if var.are_antonyms(t.name, t.intensifies):
                raise KBValidationError(f"{where}.{t.name}: a term cannot both intensify and oppose {t.intensifies!r}")
            if var.distance(t.name, t.intensifies) != 1:
                raise KBValidationError(f"{where}.{t.name}: an intensifier must be adjacent to {t.intensifies!r}")
    for left, right in zip(var.terms, var.terms[1:]):
        if not left.mf.c < right.mf.b:
            raise KBValidationError(
                f"{where}: cores of {left.name!r} and {right.name!r} overlap or are out of order"
            )
    if var.partition:
        x = _check_covers([t.mf for t in var.terms], *var.domain)
        if x is not None:
            raise KBValidationError(f"terms of {var.name!r} do not cover domain (membership sum < 1 at {x:g})")


def _parse_quantifiers(raw: list, partition: bool) -> tuple[Quantifier, ...]:
    quantifiers = []
    for i, q in enumerate(raw):
        where = f"quantifiers[{i}]"
        name = _req(q, "name", str, where)
        mf = _mf(_req(q, "mf", list, where), f"quantifiers.{name}.mf")
        if mf.a < 0.0 or mf.d > 1.0:
            raise KBValidationError(f"quantifier {name!r} must be defined over the proportion domain [0, 1]")
        quantifiers.append(Quantifier(name, mf, i))
    if len(quantifiers) < 2:
        raise KBValidationError("knowledge base needs at least two quantifiers")
    names = [q.name for q in quantifiers]
    if len(set(names)) != len(names):
        raise KBValidationError("quantifier names are not unique")
    for left, right in zip(quantifiers, quantifiers[1:]):
        if not left.mf.c < right.mf.b:
            raise KBValidationError(f"cores of quantifiers {left.name!r} and {right.name!r} overlap or are out of order")
    if partition:
        x = _check_covers([q.mf for q in quantifiers], 0.0, 1.0)
        if x is not None:
            raise KBValidationError(f"quantifiers do not cover [0, 1] (membership sum < 1 at {x:g})")
    return tuple(quantifiers)


def _check_lexicon(kb: FuzzyKnowledgeBase) -> None:
    lex = kb.lexicon
    band_names = [b.name for b in lex.bands]
    for var in kb.variables.values():
        for t in var.terms:
            words = lex.terms.get(var.name, {}).get(t.name)
            if words is None:
                raise KBValidationError(f"lexicon has no entry for {var.name}/{t.name}")
            missing = [b for b in band_names if b not in words]
            if missing:
                raise KBValidationError(f"lexicon entry {var.name}/{t.name} lacks bands {missing}")
    for q in kb.quantifiers:
        if q.name not in lex.quantifiers:
            raise KBValidationError(f"lexicon has no entry for quantifier {q.name!r}")
    for name in lex.predominant_quantifiers:
        if name not in lex.quantifiers:
            raise KBValidationError(f"predominant quantifier {name!r} is not a declared quantifier")


def load_kb(source: str | bytes) -> FuzzyKnowledgeBase:
    """Parse and validate a knowledge base from TOML text."""
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    try:
        raw = tomllib.loads(source)
    except tomllib.TOMLDecodeError as exc:
        m = _TOML_POS.search(str(exc))
        line, col = (int(m.group(1)), int(m.group(2))) if m else (None, None)
        raise KBParseError(f"malformed knowledge base: {_TOML_POS.sub('', str(exc)).strip()}", line, col) from None

    version = raw.get("schema_version")
    if version != SCHEMA_VERSION:
        raise KBParseError(f"schema_version: expected {SCHEMA_VERSION}, got {version!r}")

    quantifier_partition = bool(raw.get("quantifier_partition", False))
    quantifiers = _parse_quantifiers(_req(raw, "quantifiers", list, "<root>"), quantifier_partition)

    variables: dict[str, LinguisticVariable] = {}
    for i, v in enumerate(_req(raw, "variables", list, "<root>")):
        var = _parse_variable(v, f"variables[{i}]")
        if var.name in variables:
            raise KBValidationError(f"variable {var.name!r} declared twice")
        variables[var.name] = var
    if not variables:
        raise KBValidationError("knowledge base needs at least one variable")

    lexicon = parse_lexicon(raw["lexicon"]) if "lexicon" in raw else None
    kb = FuzzyKnowledgeBase(
        variables=variables,
        quantifiers=quantifiers,
        lexicon=lexicon,
        schema_version=version,
        quantifier_partition=quantifier_partition,
        variable_order=tuple(variables),
    )
    if lexicon is not None:
        _check_lexicon(kb)
    return kb


def load_kb_file(path: str | Path) -> FuzzyKnowledgeBase:
    return load_kb(Path(path).read_bytes())


def default_kb_text() -> str:
    return resources.files("fuzzy_d2t").joinpath("data/default_kb.toml").read_text(encoding="utf-8")


@functools.lru_cache(maxsize=1)
def default_kb() -> FuzzyKnowledgeBase:
    return load_kb(default_kb_text())
