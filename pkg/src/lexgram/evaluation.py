"""Comparison against gold annotations and count correction.

Gold file: TSV with one span per line,

    doc_id  start_byte  end_byte  label  annotator  head_form

where label is PN or SVC.  Alignment between system concordance lines and
gold spans is greedy one-to-one in text order over candidate pairs, a
line matching a span when their byte ranges overlap (or are equal, under
the exact criterion).  Processing candidate pairs in a symmetric text
order keeps the matched count invariant under swapping system and gold.

The correction extrapolates a raw occurrence count with measured
precision and recall: corrected = n * p / r.  All ratios stay unrounded
internally; rounding happens only at display time, half-up to whole
percents by default.
"""
from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, ROUND_HALF_UP, Decimal

from .concord import ConcordanceLine
from .errors import EmptyGold, EmptySystem, MalformedGold, ZeroRecall
from .lexicon import CASE_FOLD, PN_FEATURE, LexIndex, lookup

LABELS = ("PN", "SVC")
OVERLAP = "overlap"
EXACT = "exact"
CRITERIA = (OVERLAP, EXACT)

ROUNDINGS = ("half-up", "half-even")


@dataclass(frozen=True)
class GoldSpan:
    doc_id: str
    start_byte: int
    end_byte: int
    label: str
    annotator: str
    head_form: str = ""

    def __post_init__(self):
        if self.start_byte >= self.end_byte:
            raise ValueError(f"empty gold span {self.doc_id}:{self.start_byte}")
        if self.label not in LABELS:
            raise ValueError(f"unknown gold label {self.label!r}")


@dataclass(frozen=True)
class Metrics:
    """Alignment counts plus the quantities of the correction formula."""

    matched: int
    gold_total: int
    system_total: int
    p: float
    r: float
    n: int | None = None
    n_prime: float | None = None

    def __post_init__(self):
        if self.matched > min(self.gold_total, self.system_total):
            raise ValueError("matched exceeds a total")
        if not (0.0 <= self.p <= 1.0 and 0.0 <= self.r <= 1.0):
            raise ValueError("precision/recall outside [0, 1]")
        if self.n is not None and self.n_prime is not None and self.r > 0.0:
            if abs(self.n_prime - self.n * self.p / self.r) > 1e-9:
                raise ValueError("corrected count inconsistent with n * p / r")

    def with_correction(self, n: int) -> "Metrics":
        return Metrics(self.matched, self.gold_total, self.system_total,
                       self.p, self.r, n, bias_correct(n, self.p, self.r))


def load_gold(path: str) -> list[GoldSpan]:
    spans: list[GoldSpan] = []
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            stripped = line.rstrip("\n")
            if not stripped.strip() or stripped.lstrip().startswith("#"):
                continue
            fields = stripped.split("\t")
            if len(fields) != 6:
                raise MalformedGold("gold line needs 6 tab-separated fields",
                                    lineno, str(path))
            doc_id, start, end, label, annotator, head = fields
            try:
                spans.append(GoldSpan(doc_id, int(start), int(end), label,
                                      annotator, head))
            except ValueError as err:
                raise MalformedGold(str(err), lineno, str(path)) from err
    return spans


def _overlaps(a_start: int, a_end: int, b_start: int, b_end: int) -> bool:
    return a_start < b_end and b_start < a_end


def align(system: list[ConcordanceLine], gold: list[GoldSpan],
          criterion: str = OVERLAP) -> int:
    """Greedy one-to-one alignment count in text order.

    Candidate pairs are ordered by a key symmetric in the two sides, so
    swapping system and gold yields the same count (which makes precision
    and recall swap cleanly).
    """
    if criterion not in CRITERIA:
        raise ValueError(f"unknown alignment criterion {criterion!r}")
    candidates = []
    for i, line in enumerate(system):
        ls, le = line.match.start_byte, line.match.end_byte
        for j, span in enumerate(gold):
            if line.doc_id != span.doc_id:
                continue
            if criterion == EXACT:
                hit = (ls == span.start_byte and le == span.end_byte)
            else:
                hit = _overlaps(ls, le, span.start_byte, span.end_byte)
            if hit:
                key = (span.doc_id,
                       min(ls, span.start_byte), max(ls, span.start_byte),
                       min(le, span.end_byte), max(le, span.end_byte))
                candidates.append((key, i, j))
    candidates.sort(key=lambda c: c[0])
    used_system: set[int] = set()
    used_gold: set[int] = set()
    matched = 0
    for _, i, j in candidates:
        if i in used_system or j in used_gold:
            continue
        used_system.add(i)
        used_gold.add(j)
        matched += 1
    return matched


def recall(matched: int, gold_total: int) -> float:
    if gold_total <= 0:
        raise EmptyGold("no gold spans")
    return matched / gold_total


def precision(matched: int, system_total: int) -> float:
    if system_total <= 0:
        raise EmptySystem("no system lines")
    return matched / system_total


def average(a: float, b: float) -> float:
    """Arithmetic mean of two unrounded ratios."""
    if not (0.0 <= a <= 1.0 and 0.0 <= b <= 1.0):
        raise ValueError("ratios outside [0, 1]")
    return (a + b) / 2.0


def bias_correct(n: float, p: float, r: float) -> float:
    """Corrected count n * p / r, unrounded; display rounding is separate."""
    if r <= 0.0:
        raise ZeroRecall("correction undefined for recall 0")
    if not (0.0 <= p <= 1.0 and r <= 1.0):
        raise ValueError("precision/recall outside [0, 1]")
    return n * p / r


def corrected_proportion(n_pn: float, p_pn: float, r_pn: float,
                         n_svc: float, p_svc: float, r_svc: float) -> float:
    """Ratio of the two corrected counts, on unrounded intermediates."""
    return bias_correct(n_svc, p_svc, r_svc) / bias_correct(n_pn, p_pn, r_pn)


def measure(system: list[ConcordanceLine], gold: list[GoldSpan],
            criterion: str = OVERLAP) -> Metrics:
    matched = align(system, gold, criterion)
    return Metrics(matched, len(gold), len(system),
                   precision(matched, len(system)), recall(matched, len(gold)))


def in_lexicon_recall(system: list[ConcordanceLine], gold: list[GoldSpan],
                      index: LexIndex, criterion: str = OVERLAP) -> float:
    """Recall over the gold spans whose head noun the lexicon knows as a
    predicative noun under any reading."""
    restricted = []
    for span in gold:
        if not span.head_form:
            continue
        analyses = lookup(index, span.head_form, CASE_FOLD)
        if any(PN_FEATURE in a.sem_features for a in analyses):
            restricted.append(span)
    if not restricted:
        raise EmptyGold("no gold spans with an in-lexicon head")
    return recall(align(system, restricted, criterion), len(restricted))


# ---------------------------------------------------------------------------
# display rounding

def round_half_up(value: float) -> int:
    return int(Decimal(repr(value)).quantize(Decimal("1"), rounding=ROUND_HALF_UP))


def round_display(value: float, mode: str = "half-up") -> int:
    if mode not in ROUNDINGS:
        raise ValueError(f"unknown rounding mode {mode!r}")
    rounding = ROUND_HALF_UP if mode == "half-up" else ROUND_HALF_EVEN
    return int(Decimal(repr(value)).quantize(Decimal("1"), rounding=rounding))


def percent(ratio: float, mode: str = "half-up") -> str:
    """Whole-percent display string for a ratio, e.g. 0.0351 -> '4%'."""
    return f"{round_display(ratio * 100.0, mode)}%"


def format_ratio(ratio: float) -> str:
    return f"{ratio:.4f}"
