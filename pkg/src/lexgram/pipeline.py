"""Declarative run configuration and the batch pipeline.

Config file: ``key = value`` lines, ``#`` comments, blank lines ignored.
Multi-valued keys take space-separated values.  Relative paths resolve
against the directory containing the config file.

    lexicon          static inflected lexicon files
    lemmas           lemma files expanded through the paradigms
    paradigms        paradigm files
    pn_grammar       noun grammar graph files (required)
    svc_grammar      verb-construction grammar graph files (required)
    pn_main          main graph name (default: first graph of first file)
    svc_main         ditto for the verb grammar
    pn_grammar_nca   optional per-subcategory grammar overrides
    pn_grammar_ncf / pn_grammar_cv / svc_grammar_nca / svc_grammar_ncf /
    svc_grammar_cv
    corpus           glob of corpus text files (required)
    gold             gold annotation TSV (optional; enables the eval stage)
    eval_docs        doc ids restricting the eval stage (optional)
    policy           longest | all | shortest
    width            concordance context width in characters
    case_policy      exact | sentence-initial-fold
    alignment        overlap | exact
    rounding         half-up | half-even
    subcats          subset of NCA NCF CV
    out              output directory

The pipeline runs inflect, index, tag, locate (both grammars), classify,
and optionally eval, writing pn_concordance.tsv, svc_concordance.tsv,
classification.tsv and metrics.tsv.  Identical inputs produce
byte-identical outputs.
"""
from __future__ import annotations

import glob as globmod
import os
from dataclasses import dataclass, field

from . import classify as classify_mod
from . import evaluation
from .concord import ConcordanceLine, build_concordance, format_concordance, sort_concordance
from .errors import ConfigError
from .inflect import expand_lexicon, load_lemma_entries, load_paradigms
from .lexicon import (
    CASE_FOLD,
    CASE_POLICIES,
    SUBCATEGORIES,
    LexEntry,
    LexIndex,
    build_index,
    load_lexicon,
)
from .rtn import POLICIES, Grammar, Match, flatten, load_grammar, locate
from .textproc import TaggedText, read_text, tag, tokenize

_LIST_KEYS = {"lexicon", "lemmas", "paradigms", "pn_grammar", "svc_grammar",
              "pn_grammar_nca", "pn_grammar_ncf", "pn_grammar_cv",
              "svc_grammar_nca", "svc_grammar_ncf", "svc_grammar_cv",
              "subcats", "eval_docs"}
_SCALAR_KEYS = {"pn_main", "svc_main", "corpus", "gold", "policy", "width",
                "case_policy", "alignment", "rounding", "out"}
_SUBCAT_KEYS = {"NCA": ("pn_grammar_nca", "svc_grammar_nca"),
                "NCF": ("pn_grammar_ncf", "svc_grammar_ncf"),
                "CV": ("pn_grammar_cv", "svc_grammar_cv")}


@dataclass
class RunConfig:
    lexicon: list[str] = field(default_factory=list)
    lemmas: list[str] = field(default_factory=list)
    paradigms: list[str] = field(default_factory=list)
    pn_grammar: list[str] = field(default_factory=list)
    svc_grammar: list[str] = field(default_factory=list)
    pn_main: str | None = None
    svc_main: str | None = None
    pn_subcat_grammars: dict[str, list[str]] = field(default_factory=dict)
    svc_subcat_grammars: dict[str, list[str]] = field(default_factory=dict)
    corpus: str = ""
    gold: str | None = None
    eval_docs: list[str] = field(default_factory=list)
    policy: str = "longest"
    width: int = 40
    case_policy: str = CASE_FOLD
    alignment: str = evaluation.OVERLAP
    rounding: str = "half-up"
    subcats: tuple[str, ...] = SUBCATEGORIES
    out: str = "out"


def parse_config(path: str) -> RunConfig:
    """Parse and validate a config file; every referenced path must exist."""
    if not os.path.isfile(path):
        raise ConfigError(f"config file not found: {path}")
    base = os.path.dirname(os.path.abspath(path))
    values: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            if "=" not in stripped:
                raise ConfigError(f"{path}, line {lineno}: expected key = value")
            key, _, value = stripped.partition("=")
            key = key.strip()
            value = value.strip()
            if key not in _LIST_KEYS and key not in _SCALAR_KEYS:
                raise ConfigError(f"{path}, line {lineno}: unknown key {key!r}")
            if key in values:
                raise ConfigError(f"{path}, line {lineno}: duplicate key {key!r}")
            values[key] = value

    def resolve(rel: str) -> str:
        return os.path.normpath(os.path.join(base, rel))

    def path_list(key: str, required: bool = False) -> list[str]:
        raw = values.get(key, "")
        paths = [resolve(p) for p in raw.split()]
        if required and not paths:
            raise ConfigError(f"missing required key {key!r}")
        for p in paths:
            if not os.path.isfile(p):
                raise ConfigError(f"{key}: file not found: {p}")
        return paths

    cfg = RunConfig()
    cfg.lexicon = path_list("lexicon")
    cfg.lemmas = path_list("lemmas")
    cfg.paradigms = path_list("paradigms")
    cfg.pn_grammar = path_list("pn_grammar", required=True)
    cfg.svc_grammar = path_list("svc_grammar", required=True)
    if not cfg.lexicon and not (cfg.lemmas and cfg.paradigms):
        raise ConfigError("need a lexicon, or lemmas plus paradigms")
    if cfg.lemmas and not cfg.paradigms:
        raise ConfigError("lemmas given without paradigms")
    for subcat, (pn_key, svc_key) in _SUBCAT_KEYS.items():
        pn_paths = path_list(pn_key)
        svc_paths = path_list(svc_key)
        if pn_paths:
            cfg.pn_subcat_grammars[subcat] = pn_paths
        if svc_paths:
            cfg.svc_subcat_grammars[subcat] = svc_paths
    cfg.pn_main = values.get("pn_main") or None
    cfg.svc_main = values.get("svc_main") or None

    if "corpus" not in values:
        raise ConfigError("missing required key 'corpus'")
    cfg.corpus = resolve(values["corpus"])
    if not globmod.glob(cfg.corpus):
        raise ConfigError(f"corpus glob matches no file: {cfg.corpus}")
    if "gold" in values and values["gold"]:
        cfg.gold = resolve(values["gold"])
        if not os.path.isfile(cfg.gold):
            raise ConfigError(f"gold: file not found: {cfg.gold}")
    cfg.eval_docs = values.get("eval_docs", "").split()

    cfg.policy = values.get("policy", cfg.policy)
    if cfg.policy not in POLICIES:
        raise ConfigError(f"bad policy {cfg.policy!r}")
    try:
        cfg.width = int(values.get("width", str(cfg.width)))
    except ValueError:
        raise ConfigError(f"bad width {values['width']!r}") from None
    if cfg.width < 0:
        raise ConfigError("width must be >= 0")
    cfg.case_policy = values.get("case_policy", cfg.case_policy)
    if cfg.case_policy not in CASE_POLICIES:
        raise ConfigError(f"bad case_policy {cfg.case_policy!r}")
    cfg.alignment = values.get("alignment", cfg.alignment)
    if cfg.alignment not in evaluation.CRITERIA:
        raise ConfigError(f"bad alignment {cfg.alignment!r}")
    cfg.rounding = values.get("rounding", cfg.rounding)
    if cfg.rounding not in evaluation.ROUNDINGS:
        raise ConfigError(f"bad rounding {cfg.rounding!r}")
    if "subcats" in values:
        subcats = tuple(values["subcats"].split())
        for subcat in subcats:
            if subcat not in SUBCATEGORIES:
                raise ConfigError(f"bad subcategory {subcat!r}")
        cfg.subcats = subcats
    cfg.out = resolve(values.get("out", cfg.out))
    return cfg


# ---------------------------------------------------------------------------
# stages

def build_entries(cfg: RunConfig) -> list[LexEntry]:
    """Static lexicon files plus the expanded lemma entries, in file order."""
    entries: list[LexEntry] = []
    for path in cfg.lexicon:
        entries.extend(load_lexicon(path))
    if cfg.lemmas:
        paradigms = load_paradigms(cfg.paradigms)
        for path in cfg.lemmas:
            entries.extend(expand_lexicon(load_lemma_entries(path), paradigms))
    return entries


@dataclass
class GrammarSet:
    pn: Grammar
    svc: Grammar
    pn_by_subcat: dict[str, Grammar]
    svc_by_subcat: dict[str, Grammar]


def load_grammars(cfg: RunConfig) -> GrammarSet:
    pn = load_grammar(cfg.pn_grammar, cfg.pn_main)
    svc = load_grammar(cfg.svc_grammar, cfg.svc_main)
    pn_by = {sc: load_grammar(paths) for sc, paths in sorted(cfg.pn_subcat_grammars.items())}
    svc_by = {sc: load_grammar(paths) for sc, paths in sorted(cfg.svc_subcat_grammars.items())}
    return GrammarSet(pn, svc, pn_by, svc_by)


def load_corpus(cfg: RunConfig) -> list[tuple[str, str]]:
    """Corpus documents as (doc_id, text), sorted by doc id."""
    docs = []
    seen: set[str] = set()
    for path in sorted(globmod.glob(cfg.corpus)):
        doc_id = os.path.splitext(os.path.basename(path))[0]
        if doc_id in seen:
            raise ConfigError(f"duplicate doc id {doc_id!r} in corpus glob")
        seen.add(doc_id)
        docs.append((doc_id, read_text(path)))
    docs.sort(key=lambda d: d[0])
    return docs


def tag_corpus(docs: list[tuple[str, str]], index: LexIndex,
               case_policy: str = CASE_FOLD) -> list[tuple[str, TaggedText]]:
    return [(doc_id, tag(tokenize(text), index, text, case_policy))
            for doc_id, text in docs]


def locate_corpus(tagged_docs: list[tuple[str, TaggedText]], grammar: Grammar,
                  policy: str = "longest") -> list[tuple[str, list[Match]]]:
    flat = flatten(grammar)
    return [(doc_id, locate(flat, tagged, policy)) for doc_id, tagged in tagged_docs]


def concordance_for(located: list[tuple[str, list[Match]]],
                    tagged_docs: list[tuple[str, TaggedText]],
                    width: int) -> list[ConcordanceLine]:
    tagged_by_doc = dict(tagged_docs)
    lines: list[ConcordanceLine] = []
    for doc_id, matches in located:
        lines.extend(build_concordance(matches, tagged_by_doc[doc_id], width, doc_id))
    return sort_concordance(lines, "text")


@dataclass
class MetricRow:
    section: str
    label: str
    annotator: str
    gold_total: str
    matched: str
    system_total: str
    value: float
    extra: str = ""


@dataclass
class PipelineResult:
    counts: classify_mod.ClassifiedCounts
    rows: list[classify_mod.SubcatRow]
    pn_lines: list[ConcordanceLine]
    svc_lines: list[ConcordanceLine]
    metric_rows: list[MetricRow]
    corrected_counts: tuple[float, float] | None
    written: list[str]


def _eval_stage(cfg: RunConfig, pn_lines: list[ConcordanceLine],
                svc_lines: list[ConcordanceLine],
                counts: classify_mod.ClassifiedCounts):
    """Per-annotator metrics, averages, and the count corrections.

    Returns (metric rows, averaged (p, r) per label, corrected counts).
    """
    gold = evaluation.load_gold(cfg.gold)
    if cfg.eval_docs:
        wanted = set(cfg.eval_docs)
        gold = [g for g in gold if g.doc_id in wanted]
        pn_lines = [l for l in pn_lines if l.doc_id in wanted]
        svc_lines = [l for l in svc_lines if l.doc_id in wanted]
    system_by_label = {"PN": pn_lines, "SVC": svc_lines}
    rows: list[MetricRow] = []
    averaged: dict[str, tuple[float, float]] = {}
    for label in ("PN", "SVC"):
        system = system_by_label[label]
        annotators = sorted({g.annotator for g in gold if g.label == label})
        precisions: list[float] = []
        recalls: list[float] = []
        for annotator in annotators:
            spans = [g for g in gold if g.label == label and g.annotator == annotator]
            metrics = evaluation.measure(system, spans, cfg.alignment)
            precisions.append(metrics.p)
            recalls.append(metrics.r)
            rows.append(MetricRow("recall", label, annotator, str(metrics.gold_total),
                                  str(metrics.matched), "-", metrics.r))
            rows.append(MetricRow("precision", label, annotator, "-",
                                  str(metrics.matched), str(metrics.system_total),
                                  metrics.p))
        if len(precisions) >= 2:
            p_avg = evaluation.average(precisions[0], precisions[1])
            r_avg = evaluation.average(recalls[0], recalls[1])
        elif precisions:
            p_avg, r_avg = precisions[0], recalls[0]
        else:
            continue
        rows.append(MetricRow("recall", label, "average", "-", "-", "-", r_avg))
        rows.append(MetricRow("precision", label, "average", "-", "-", "-", p_avg))
        averaged[label] = (p_avg, r_avg)
    corrected = None
    if "PN" in averaged and "SVC" in averaged and averaged["PN"][1] > 0 \
            and averaged["SVC"][1] > 0:
        p_pn, r_pn = averaged["PN"]
        p_svc, r_svc = averaged["SVC"]
        corr_pn = evaluation.bias_correct(counts.pn_total, p_pn, r_pn)
        corr_svc = evaluation.bias_correct(counts.pn_with_sv, p_svc, r_svc)
        rows.append(MetricRow("correction", "PN", "-", str(counts.pn_total),
                              "-", "-", corr_pn,
                              f"p={p_pn:.4f} r={r_pn:.4f}"))
        rows.append(MetricRow("correction", "SVC", "-", str(counts.pn_with_sv),
                              "-", "-", corr_svc,
                              f"p={p_svc:.4f} r={r_svc:.4f}"))
        corrected = (corr_pn, corr_svc)
    return rows, averaged, corrected


def format_metrics(rows: list[MetricRow], rounding: str = "half-up") -> str:
    out = ["# section\tlabel\tannotator\tgold\tmatched\tsystem\tvalue\tdisplay\textra"]
    for row in rows:
        if row.section == "correction":
            display = str(evaluation.round_display(row.value, rounding))
            value = f"{row.value:.4f}"
        else:
            display = evaluation.percent(row.value, rounding)
            value = evaluation.format_ratio(row.value)
        out.append("\t".join([row.section, row.label, row.annotator,
                              row.gold_total, row.matched, row.system_total,
                              value, display, row.extra]))
    return "\n".join(out) + "\n"


def run_pipeline(cfg: RunConfig, out_dir: str | None = None) -> PipelineResult:
    """Execute every stage and write the report files."""
    out = out_dir or cfg.out
    entries = build_entries(cfg)
    index = build_index(entries)
    grammars = load_grammars(cfg)
    docs = load_corpus(cfg)
    tagged_docs = tag_corpus(docs, index, cfg.case_policy)

    pn_located = locate_corpus(tagged_docs, grammars.pn, cfg.policy)
    svc_located = locate_corpus(tagged_docs, grammars.svc, cfg.policy)
    pn_lines = concordance_for(pn_located, tagged_docs, cfg.width)
    svc_lines = concordance_for(svc_located, tagged_docs, cfg.width)

    located_by_doc = {doc_id: matches for doc_id, matches in pn_located}
    counts = classify_mod.combine([
        classify_mod.classify_pn(located_by_doc[doc_id], svc_matches)
        for doc_id, svc_matches in svc_located])

    metric_rows: list[MetricRow] = []
    corrected = None
    correction = None
    if cfg.gold:
        metric_rows, averaged, corrected = _eval_stage(cfg, pn_lines, svc_lines, counts)
        if "PN" in averaged and "SVC" in averaged and averaged["PN"][1] > 0 \
                and averaged["SVC"][1] > 0:
            correction = (averaged["PN"], averaged["SVC"])

    rows = classify_mod.by_subcategory(
        docs, entries, grammars.pn, grammars.svc, cfg.subcats,
        pn_by_subcat=grammars.pn_by_subcat, svc_by_subcat=grammars.svc_by_subcat,
        policy=cfg.policy, case_policy=cfg.case_policy, correction=correction)

    written: list[str] = []
    os.makedirs(out, exist_ok=True)

    def emit(name: str, payload: str) -> None:
        path = os.path.join(out, name)
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(payload)
        written.append(path)

    emit("pn_concordance.tsv", format_concordance(pn_lines))
    emit("svc_concordance.tsv", format_concordance(svc_lines))
    emit("classification.tsv",
         classify_mod.format_classification(counts, rows, rounding=cfg.rounding,
                                            corrected_counts=corrected))
    if cfg.gold:
        emit("metrics.tsv", format_metrics(metric_rows, cfg.rounding))
    return PipelineResult(counts, rows, pn_lines, svc_lines, metric_rows,
                          corrected, written)
