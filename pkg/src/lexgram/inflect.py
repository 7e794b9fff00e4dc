"""Operator-based inflection paradigms and lexicon expansion.

Paradigm file (UTF-8):

    paradigm NAME:
        <e>:fs ; s:fp

A ``paradigm NAME:`` header opens a section; the rules run until the next
header, separated by ``;``.  Each rule is a sequence of space-separated
operator tokens followed by ``:`` and the inflection code the produced
form carries.  Token ``L`` deletes the last character of the working
form, ``<e>`` does nothing, any other token appends itself literally.
``#`` comments and blank lines are ignored.

Lemma file: one entry per line,

    lemma "." category ("+" feature)* ":" paradigm_name

with the same escaping rules as the lexicon format for the lemma part.
Expanding a lemma entry applies every rule of its paradigm and emits one
inflected lexicon entry per generated form.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import LemmaTooShort, MalformedEntry, MalformedParadigm, UnknownParadigm
from .lexicon import (
    _CATEGORY_ALPHABET,
    _TAG_ALPHABET,
    LexEntry,
    _scan_field,
    _scan_tag,
)

DELETE_OP = "L"
NOOP_OP = "<e>"

_HEADER_RE = re.compile(r"^paradigm\s+([A-Za-z0-9=-]+):\s*(.*)$")


@dataclass(frozen=True)
class Rule:
    """One inflection recipe: operators applied left to right to the lemma."""

    ops: tuple[str, ...]
    infl_code: str

    def apply(self, lemma: str) -> str:
        form = lemma
        for op in self.ops:
            if op == DELETE_OP:
                if len(form) <= 1:
                    raise LemmaTooShort(
                        f"deleting from {lemma!r} would empty the form "
                        f"(rule for code {self.infl_code!r})")
                form = form[:-1]
            elif op == NOOP_OP:
                continue
            else:
                form += op
        if not form:
            raise LemmaTooShort(f"rule for code {self.infl_code!r} produced "
                                f"an empty form from {lemma!r}")
        return form

    @property
    def delete_count(self) -> int:
        return sum(1 for op in self.ops if op == DELETE_OP)


@dataclass(frozen=True)
class Paradigm:
    name: str
    rules: tuple[Rule, ...]

    @property
    def max_delete(self) -> int:
        return max((r.delete_count for r in self.rules), default=0)


def _parse_rule(text: str) -> Rule:
    if ":" not in text:
        raise MalformedParadigm(text)
    ops_part, code = text.rsplit(":", 1)
    code = code.strip()
    ops = tuple(ops_part.split())
    if not ops or not code or not set(code) <= _TAG_ALPHABET:
        raise MalformedParadigm(text)
    for op in ops:
        if ":" in op:
            raise MalformedParadigm(text)
    return Rule(ops, code)


def parse_paradigm_file(text: str, path: str | None = None) -> dict[str, Paradigm]:
    """Parse every paradigm section of a file, keyed by name."""
    paradigms: dict[str, Paradigm] = {}
    name: str | None = None
    body: list[str] = []

    def close() -> None:
        if name is None:
            return
        rules: list[Rule] = []
        codes_seen: set[str] = set()
        joined = "\n".join(body)
        for chunk in joined.split(";"):
            chunk = chunk.strip()
            if not chunk:
                continue
            rule = _parse_rule(chunk)
            if rule.infl_code in codes_seen:
                raise MalformedParadigm(
                    f"duplicate inflection code {rule.infl_code!r} in paradigm {name!r}",
                    path)
            codes_seen.add(rule.infl_code)
            rules.append(rule)
        if not rules:
            raise MalformedParadigm(f"paradigm {name!r} has no rules", path)
        if name in paradigms:
            raise MalformedParadigm(f"duplicate paradigm {name!r}", path)
        paradigms[name] = Paradigm(name, tuple(rules))

    for line in text.splitlines():
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        header = _HEADER_RE.match(stripped)
        if header:
            close()
            name = header.group(1)
            body = [header.group(2)] if header.group(2) else []
        elif name is None:
            raise MalformedParadigm(stripped, path)
        else:
            body.append(stripped)
    close()
    return paradigms


def parse_paradigm(text: str) -> Paradigm:
    """Parse a single paradigm section."""
    paradigms = parse_paradigm_file(text)
    if len(paradigms) != 1:
        raise MalformedParadigm(text.strip().splitlines()[0] if text.strip() else "")
    return next(iter(paradigms.values()))


def load_paradigms(paths: list[str]) -> dict[str, Paradigm]:
    merged: dict[str, Paradigm] = {}
    for path in paths:
        with open(path, "r", encoding="utf-8") as handle:
            for name, paradigm in parse_paradigm_file(handle.read(), str(path)).items():
                if name in merged:
                    raise MalformedParadigm(f"duplicate paradigm {name!r}", str(path))
                merged[name] = paradigm
    return merged


def generate(lemma: str, paradigm: Paradigm) -> list[tuple[str, str]]:
    """All (form, inflection code) pairs for a lemma, one per rule, in rule
    order.  Raises LemmaTooShort when a delete would empty the form."""
    if not lemma:
        raise LemmaTooShort("empty lemma")
    pairs: list[tuple[str, str]] = []
    for rule in paradigm.rules:
        pair = (rule.apply(lemma), rule.infl_code)
        if pair not in pairs:
            pairs.append(pair)
    return pairs


@dataclass(frozen=True)
class LemmaEntry:
    lemma: str
    category: str
    sem_features: tuple[str, ...]
    paradigm_name: str


def parse_lemma_entry(line: str) -> LemmaEntry:
    raw = line.rstrip("\n")
    if raw.endswith("\r"):
        raw = raw[:-1]
    lemma, i = _scan_field(raw, 0, ".")
    if i >= len(raw):
        raise MalformedEntry("missing dot after lemma", len(raw) or 1)
    if not lemma:
        raise MalformedEntry("empty lemma", 1)
    k = i + 1
    category, k = _scan_tag(raw, k, _CATEGORY_ALPHABET)
    if not category:
        raise MalformedEntry("empty category", k + 1)
    features: list[str] = []
    while k < len(raw) and raw[k] == "+":
        feat, k2 = _scan_tag(raw, k + 1, _TAG_ALPHABET)
        if not feat:
            raise MalformedEntry("empty feature", k + 2)
        if feat not in features:
            features.append(feat)
        k = k2
    if k >= len(raw) or raw[k] != ":":
        raise MalformedEntry("missing paradigm name", k + 1)
    name, k2 = _scan_tag(raw, k + 1, _TAG_ALPHABET)
    if not name:
        raise MalformedEntry("empty paradigm name", k + 2)
    if k2 < len(raw):
        raise MalformedEntry(f"unexpected character {raw[k2]!r}", k2 + 1)
    return LemmaEntry(lemma, category, tuple(features), name)


def load_lemma_entries(path: str) -> list[LemmaEntry]:
    entries: list[LemmaEntry] = []
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            try:
                entries.append(parse_lemma_entry(line))
            except MalformedEntry as err:
                err.line = lineno
                err.path = str(path)
                raise
    return entries


def expand_lexicon(lemma_entries: list[LemmaEntry],
                   paradigms: dict[str, Paradigm]) -> list[LexEntry]:
    """Inflect every lemma entry; output order is input order then rule
    order, so repeated runs are byte-identical."""
    out: list[LexEntry] = []
    for le in lemma_entries:
        paradigm = paradigms.get(le.paradigm_name)
        if paradigm is None:
            raise UnknownParadigm(f"lemma {le.lemma!r} names unknown paradigm "
                                  f"{le.paradigm_name!r}")
        try:
            pairs = generate(le.lemma, paradigm)
        except LemmaTooShort as err:
            raise LemmaTooShort(f"lemma {le.lemma!r}, paradigm "
                                f"{le.paradigm_name!r}: {err}") from err
        for form, code in pairs:
            out.append(LexEntry(form, le.lemma, le.category,
                                le.sem_features, (code,)))
    return out
