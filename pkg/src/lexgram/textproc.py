"""Tokenization with byte offsets and lexical tagging.

A word token is a maximal run of letters, including hyphens and
apostrophes that sit between letters.  A 1-2 letter prefix ending in an
apostrophe (elided articles such as ``l'``) is split off as its own word
token.  Digit runs are number tokens, anything else is a one-character
punctuation token.  A sentence boundary falls after ``.`` ``!`` ``?``
followed by whitespace and an uppercase letter.

Tagging attaches every analysis the lexicon has for a token; ambiguity is
deliberately never pruned.  Words the lexicon does not cover get the
UNKNOWN pseudo-analysis so downstream code can treat the token stream as
fully annotated.
"""
from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field

from .errors import EmptyInput, InvalidEncoding
from .lexicon import CASE_EXACT, CASE_FOLD, Analysis, LexIndex, lookup

WORD = "word"
PUNCT = "punct"
NUMBER = "number"

UNKNOWN = Analysis(lemma="?", category="UNKNOWN", sem_features=frozenset())

_APOSTROPHES = ("'", "’")
_SENTENCE_FINAL = (".", "!", "?")
_OPENERS = "([{«"
_CLOSERS = ")]}»"


@dataclass(frozen=True)
class Token:
    """A source span; offsets are byte positions into the UTF-8 text."""

    surface: str
    start: int
    end: int
    kind: str
    sentence_initial: bool = False


@dataclass(frozen=True)
class TaggedToken:
    token: Token
    analyses: frozenset[Analysis]

    @property
    def is_unknown(self) -> bool:
        return self.analyses == frozenset([UNKNOWN])


@dataclass
class TaggedText:
    """Tagged token stream plus the raw text it came from.

    ``boundaries`` holds the indices of tokens that begin every sentence
    after the first, strictly increasing.
    """

    tokens: list[TaggedToken]
    source: str
    boundaries: tuple[int, ...]
    _bounds: list[int] = field(init=False, repr=False)

    def __post_init__(self):
        self._bounds = list(self.boundaries)

    def sentence_end(self, index: int) -> int:
        """Index one past the last token of the sentence containing ``index``."""
        at = bisect_right(self._bounds, index)
        if at < len(self._bounds):
            return self._bounds[at]
        return len(self.tokens)

    def source_bytes(self) -> bytes:
        return self.source.encode("utf-8")


def _scan(text: str) -> list[tuple[int, int, str]]:
    """Raw token spans as (start_char, end_char, kind)."""
    raws: list[tuple[int, int, str]] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isalpha():
            j = i + 1
            while j < n:
                c = text[j]
                if c.isalpha():
                    j += 1
                elif (c == "-" and text[j - 1].isalpha()
                      and j + 1 < n and text[j + 1].isalpha()):
                    j += 1
                elif (c in _APOSTROPHES and text[j - 1].isalpha()
                      and j + 1 < n and text[j + 1].isalpha()):
                    j += 1
                else:
                    break
            # elision rule: 1-2 letter prefix before an apostrophe splits off
            s = i
            while True:
                cut = -1
                for off in range(s, j):
                    if text[off] in _APOSTROPHES:
                        cut = off
                        break
                if cut != -1 and cut - s in (1, 2):
                    raws.append((s, cut + 1, WORD))
                    s = cut + 1
                else:
                    break
            if s < j:
                raws.append((s, j, WORD))
            i = j
        elif ch.isdigit():
            j = i + 1
            while j < n and text[j].isdigit():
                j += 1
            raws.append((i, j, NUMBER))
            i = j
        else:
            raws.append((i, i + 1, PUNCT))
            i += 1
    return raws


def _sentence_starts(source_bytes: bytes, spans: list[tuple[int, int, str]],
                     surfaces: list[str]) -> set[int]:
    """Token indices that open a sentence after the first one.

    ``spans`` carries byte offsets here.  A boundary needs sentence-final
    punctuation, at least one whitespace byte, then an uppercase letter.
    """
    starts: set[int] = set()
    for idx, (start, end, kind) in enumerate(spans):
        if kind != PUNCT or surfaces[idx] not in _SENTENCE_FINAL:
            continue
        if idx + 1 >= len(spans):
            continue
        k = end
        saw_space = False
        while k < len(source_bytes) and source_bytes[k:k + 1] in (b" ", b"\t", b"\r", b"\n"):
            saw_space = True
            k += 1
        if not saw_space or k >= len(source_bytes):
            continue
        nxt = source_bytes[k:k + 4].decode("utf-8", "ignore")
        if nxt and nxt[0].isalpha() and nxt[0].isupper():
            starts.add(idx + 1)
    return starts


def tokenize(text: str) -> list[Token]:
    if not isinstance(text, str):
        raise InvalidEncoding("tokenize expects decoded text")
    raws = _scan(text)
    # char offset -> byte offset prefix table
    byte_of = [0] * (len(text) + 1)
    total = 0
    for pos, ch in enumerate(text):
        byte_of[pos] = total
        total += len(ch.encode("utf-8"))
    byte_of[len(text)] = total

    spans = [(byte_of[cs], byte_of[ce], kind) for cs, ce, kind in raws]
    surfaces = [text[cs:ce] for cs, ce, _ in raws]
    starts = _sentence_starts(text.encode("utf-8"), spans, surfaces)

    bounds = sorted(starts)
    tokens: list[Token] = []
    sentence_starts = [0] + bounds
    initial_at: set[int] = set()
    for opens in sentence_starts:
        limit = next((b for b in bounds if b > opens), len(raws))
        for idx in range(opens, limit):
            if raws[idx][2] == WORD:
                initial_at.add(idx)
                break
    for idx, ((start, end, kind), surface) in enumerate(zip(spans, surfaces)):
        tokens.append(Token(surface, start, end, kind, idx in initial_at))
    return tokens


def _punct_analysis(surface: str) -> Analysis:
    feats = set()
    if surface in _OPENERS:
        feats.add("OPEN")
    elif surface in _CLOSERS:
        feats.add("CLOSE")
    return Analysis(lemma=surface, category="PONCT", sem_features=frozenset(feats))


def tag(tokens: list[Token], index: LexIndex, source: str,
        case_policy: str = CASE_FOLD) -> TaggedText:
    """Attach all lexicon analyses to every token.

    Word tokens keep the full lookup result (folding applies only to
    sentence-initial tokens and only under the fold policy); punctuation
    gets a PONCT analysis, digit runs a NUM analysis, uncovered words the
    UNKNOWN pseudo-analysis.
    """
    tagged: list[TaggedToken] = []
    for token in tokens:
        if token.kind == WORD:
            policy = case_policy if token.sentence_initial else CASE_EXACT
            analyses = lookup(index, token.surface, policy)
            if not analyses:
                analyses = frozenset([UNKNOWN])
        elif token.kind == PUNCT:
            analyses = frozenset([_punct_analysis(token.surface)])
        else:
            analyses = frozenset([Analysis(lemma=token.surface, category="NUM",
                                           sem_features=frozenset())])
        tagged.append(TaggedToken(token, analyses))

    spans = [(t.start, t.end, t.kind) for t in tokens]
    surfaces = [t.surface for t in tokens]
    starts = _sentence_starts(source.encode("utf-8"), spans, surfaces)
    return TaggedText(tagged, source, tuple(sorted(starts)))


def tagging_coverage(tagged: TaggedText) -> float:
    """Fraction of word tokens carrying at least one real analysis."""
    words = [t for t in tagged.tokens if t.token.kind == WORD]
    if not words:
        raise EmptyInput("no word tokens")
    known = sum(1 for t in words if not t.is_unknown)
    return known / len(words)


def dump_tagged(tagged: TaggedText) -> str:
    """Debug TSV: start, end, surface, semicolon-joined analyses."""
    lines = []
    for tt in tagged.tokens:
        rendered = ";".join(a.render() if a.lemma else a.category
                            for a in sorted(tt.analyses, key=lambda a: a.sort_key))
        lines.append(f"{tt.token.start}\t{tt.token.end}\t{tt.token.surface}\t{rendered}")
    return "\n".join(lines) + ("\n" if lines else "")


def read_text(path: str) -> str:
    with open(path, "rb") as handle:
        blob = handle.read()
    try:
        return blob.decode("utf-8")
    except UnicodeDecodeError as err:
        raise InvalidEncoding(f"{path}: {err}") from err
