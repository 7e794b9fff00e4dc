"""Concordance lines: matches rendered with left/right context."""
from __future__ import annotations

from dataclasses import dataclass

from .rtn import Match
from .textproc import TaggedText

ORDERS = ("text", "center", "left-reversed")


@dataclass(frozen=True)
class ConcordanceLine:
    match: Match
    left: str
    center: str
    right: str
    doc_id: str

    @property
    def text_key(self) -> tuple[str, int]:
        return (self.doc_id, self.match.start_byte)


def build_concordance(matches: list[Match], tagged: TaggedText,
                      width: int, doc_id: str) -> list[ConcordanceLine]:
    """One line per match; contexts hold at most ``width`` characters and
    token offsets keep context slicing on UTF-8 scalar boundaries."""
    if width < 0:
        raise ValueError("negative context width")
    blob = tagged.source_bytes()
    lines = []
    for m in matches:
        center = blob[m.start_byte:m.end_byte].decode("utf-8")
        left = blob[:m.start_byte].decode("utf-8")[-width:] if width else ""
        right = blob[m.end_byte:].decode("utf-8")[:width] if width else ""
        lines.append(ConcordanceLine(m, left, center, right, doc_id))
    return lines


def sort_concordance(lines: list[ConcordanceLine], order: str = "text") -> list[ConcordanceLine]:
    """Stable sort in one of the three supported orders."""
    if order not in ORDERS:
        raise ValueError(f"unknown concordance order {order!r}")
    if order == "text":
        return sorted(lines, key=lambda l: l.text_key)
    if order == "center":
        return sorted(lines, key=lambda l: (l.center,) + l.text_key)
    return sorted(lines, key=lambda l: l.left[::-1])


def _clean(text: str) -> str:
    return text.replace("\t", " ").replace("\n", " ").replace("\r", " ")


def format_concordance(lines: list[ConcordanceLine]) -> str:
    """TSV rows: doc_id, start_byte, end_byte, left, center, right.

    Tabs and newlines inside text fields become single spaces; the byte
    offsets stay authoritative.
    """
    rows = []
    for l in lines:
        rows.append("\t".join([l.doc_id, str(l.match.start_byte),
                               str(l.match.end_byte), _clean(l.left),
                               _clean(l.center), _clean(l.right)]))
    return "\n".join(rows) + ("\n" if rows else "")
