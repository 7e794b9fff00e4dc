"""Classification of noun occurrences by support-verb presence.

A noun-grammar match counts as accompanied by its support verb when some
verb-grammar match span contains it (token containment inside one
sentence; verb matches never cross sentence boundaries, so containment
implies the same sentence).  A match contained in several verb spans
still counts once: the statistics are per occurrence.

The per-subcategory mode reruns both grammars over a lexicon filtered to
one subcategory.  A noun listed under two subcategories is counted in
both rows, so subcategory counts may sum above the global row.
"""
from __future__ import annotations

from dataclasses import dataclass

from . import evaluation
from .errors import LexgramError
from .lexicon import CASE_FOLD, SUBCATEGORIES, LexEntry, build_index, filter_subcategory
from .rtn import Grammar, Match, flatten, locate
from .textproc import tag, tokenize

ALL_SCOPE = "all"


@dataclass(frozen=True)
class ClassifiedCounts:
    pn_total: int
    svc_total: int
    pn_with_sv: int
    pn_without_sv: int

    def __post_init__(self):
        if self.pn_with_sv + self.pn_without_sv != self.pn_total:
            raise LexgramError("with/without split does not partition the total")
        if min(self.pn_total, self.svc_total, self.pn_with_sv) < 0:
            raise LexgramError("negative count")

    @property
    def proportion(self) -> float:
        if self.pn_total == 0:
            return 0.0
        return self.pn_with_sv / self.pn_total


def classify_pn(pn_matches: list[Match], svc_matches: list[Match]) -> ClassifiedCounts:
    """Split noun matches over one tagged text by support-verb presence."""
    svc_spans = [(m.start_token, m.end_token) for m in svc_matches]
    with_sv = 0
    for pn in pn_matches:
        if any(s <= pn.start_token and pn.end_token <= e for s, e in svc_spans):
            with_sv += 1
    return ClassifiedCounts(len(pn_matches), len(svc_matches), with_sv,
                            len(pn_matches) - with_sv)


def combine(parts: list[ClassifiedCounts]) -> ClassifiedCounts:
    """Merge per-document counts."""
    return ClassifiedCounts(sum(p.pn_total for p in parts),
                            sum(p.svc_total for p in parts),
                            sum(p.pn_with_sv for p in parts),
                            sum(p.pn_without_sv for p in parts))


@dataclass(frozen=True)
class SubcatRow:
    """One line of the per-subcategory report.

    ``svc`` is the number of noun matches co-recognized by the verb
    grammar (the with-support-verb count); ``svc_raw`` additionally keeps
    the plain verb-grammar match count.
    """

    subcat: str
    pn: int
    pn_pct: float
    svc: int
    svc_pct: float
    ratio_svc_pn: float
    svc_raw: int
    corrected_ratio: float | None = None


def _ratio(part: int, whole: int) -> float:
    return part / whole if whole else 0.0


def by_subcategory(docs: list[tuple[str, str]], entries: list[LexEntry],
                   pn_grammar: Grammar, svc_grammar: Grammar,
                   subcats: tuple[str, ...] = SUBCATEGORIES, *,
                   pn_by_subcat: dict[str, Grammar] | None = None,
                   svc_by_subcat: dict[str, Grammar] | None = None,
                   policy: str = "longest", case_policy: str = CASE_FOLD,
                   correction: tuple[tuple[float, float], tuple[float, float]] | None = None,
                   ) -> list[SubcatRow]:
    """Rerun the pipeline per subcategory and build the report rows.

    ``correction`` supplies ((p_pn, r_pn), (p_svc, r_svc)); without it the
    corrected column stays unset.  Dedicated per-subcategory grammars may
    be supplied, otherwise the main grammars run over the filtered
    lexicon.
    """
    pn_by_subcat = pn_by_subcat or {}
    svc_by_subcat = svc_by_subcat or {}
    token_cache = [(doc_id, text, tokenize(text)) for doc_id, text in docs]
    flats: dict[int, object] = {}

    def flat_of(grammar: Grammar):
        key = id(grammar)
        if key not in flats:
            flats[key] = flatten(grammar)
        return flats[key]

    def run(scope_entries: list[LexEntry], pn_g: Grammar, svc_g: Grammar) -> ClassifiedCounts:
        index = build_index(scope_entries)
        parts = []
        for doc_id, text, tokens in token_cache:
            tagged = tag(tokens, index, text, case_policy)
            pn_matches = locate(flat_of(pn_g), tagged, policy)
            svc_matches = locate(flat_of(svc_g), tagged, policy)
            parts.append(classify_pn(pn_matches, svc_matches))
        return combine(parts)

    overall = run(entries, pn_grammar, svc_grammar)
    rows: list[SubcatRow] = []

    def corrected(pn: int, svc: int) -> float | None:
        if correction is None or pn == 0:
            return None
        (p_pn, r_pn), (p_svc, r_svc) = correction
        return evaluation.corrected_proportion(pn, p_pn, r_pn, svc, p_svc, r_svc)

    for subcat in subcats:
        filtered = filter_subcategory(entries, subcat)
        counts = run(filtered,
                     pn_by_subcat.get(subcat, pn_grammar),
                     svc_by_subcat.get(subcat, svc_grammar))
        rows.append(SubcatRow(subcat, counts.pn_total,
                              _ratio(counts.pn_total, overall.pn_total),
                              counts.pn_with_sv,
                              _ratio(counts.pn_with_sv, overall.pn_with_sv),
                              counts.proportion, counts.svc_total,
                              corrected(counts.pn_total, counts.pn_with_sv)))
    rows.append(SubcatRow(ALL_SCOPE, overall.pn_total, 1.0 if overall.pn_total else 0.0,
                          overall.pn_with_sv, 1.0 if overall.pn_with_sv else 0.0,
                          overall.proportion, overall.svc_total,
                          corrected(overall.pn_total, overall.pn_with_sv)))
    return rows


def format_classification(counts: ClassifiedCounts,
                          rows: list[SubcatRow] | None = None, *,
                          rounding: str = "half-up",
                          corrected_counts: tuple[float, float] | None = None) -> str:
    """Report TSV: a global block, then one row per subcategory.

    Every ratio is printed raw to 4 decimals and rounded to a whole
    percent.  ``corrected_counts`` optionally carries the corrected
    (pn, svc) pair computed by the evaluation stage.
    """
    fmt = evaluation.format_ratio
    pct = lambda x: evaluation.percent(x, rounding)
    out = ["# classification\tpn\tsvc_raw\twith_sv\twithout_sv\tproportion\tproportion_pct"]
    out.append("\t".join(["experimental", str(counts.pn_total), str(counts.svc_total),
                          str(counts.pn_with_sv), str(counts.pn_without_sv),
                          fmt(counts.proportion), pct(counts.proportion)]))
    if corrected_counts is not None:
        corr_pn, corr_svc = corrected_counts
        proportion = corr_svc / corr_pn if corr_pn else 0.0
        out.append("\t".join(["corrected",
                              str(evaluation.round_display(corr_pn, rounding)),
                              "-",
                              str(evaluation.round_display(corr_svc, rounding)),
                              "-", fmt(proportion), pct(proportion)]))
    if rows:
        out.append("# subcategory\tpn\tpn_pct\tsvc\tsvc_pct\tratio\tratio_pct"
                   "\tsvc_raw\tcorrected\tcorrected_pct")
        for row in rows:
            corrected = "-" if row.corrected_ratio is None else fmt(row.corrected_ratio)
            corrected_pct = "-" if row.corrected_ratio is None else pct(row.corrected_ratio)
            out.append("\t".join([row.subcat, str(row.pn),
                                  pct(row.pn_pct), str(row.svc), pct(row.svc_pct),
                                  fmt(row.ratio_svc_pn), pct(row.ratio_svc_pn),
                                  str(row.svc_raw), corrected, corrected_pct]))
    return "\n".join(out) + "\n"
