"""Randomized invariant checks over small generated inputs."""
from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from lexgram.classify import classify_pn
from lexgram.concord import ConcordanceLine, build_concordance, sort_concordance
from lexgram.evaluation import bias_correct
from lexgram.lexicon import build_index, parse_entry
from lexgram.rtn import EPSILON, Graph, Literal, Mask, Match, locate
from lexgram.textproc import tag, tokenize

CASES = 1000

_LEXICON = [
    "le,le.DET:ms", "la,le.DET:fs", "les,le.DET:mp:fp", "une,un.DET:fs",
    "ce,ce.DET:ms", "débat,débat.N+NCA+PN:ms", "vol,vol.N+NCF+PN:ms",
    "pêche,pêche.N+NCF+PN:fs", "pêche,pêche.N+CV+PN:fs",
    "grande,grand.ADJ:fs", "donne,donner.V+Supp:P3s",
    "données,donner.V+Supp:Kfp", "données,donnée.N:fp",
]
_INDEX = build_index([parse_entry(l) for l in _LEXICON])
_WORDS = ["le", "la", "les", "une", "ce", "débat", "vol", "pêche", "grande",
          "donne", "données", "zzz"]
_PUNCT = [".", ",", "(", ")"]


def random_tagged(rng: random.Random):
    parts = []
    for _ in range(rng.randrange(1, 12)):
        parts.append(rng.choice(_WORDS + _PUNCT if rng.random() < 0.9 else _PUNCT))
    text = " ".join(parts)
    return tag(tokenize(text), _INDEX, text)


def random_flat_graph(rng: random.Random) -> Graph:
    n = rng.randrange(2, 6)
    labels = [
        lambda: Literal(rng.choice(_WORDS), fold=rng.random() < 0.3),
        lambda: Mask(category=rng.choice(["DET", "N", "V", "ADJ", "PONCT"])),
        lambda: Mask(category="N", required=frozenset({"PN"})),
        lambda: Mask(category="DET", agree_group="g"),
        lambda: Mask(category="N", agree_group="g"),
        lambda: EPSILON,
    ]
    trans = []
    for _ in range(rng.randrange(1, 2 * n)):
        frm, to = rng.randrange(n), rng.randrange(n)
        label = rng.choice(labels)()
        if label is EPSILON and frm >= to:
            continue  # keep epsilon edges forward so no epsilon cycles arise
        trans.append((frm, label, to))
    finals = frozenset(rng.sample(range(n), rng.randrange(1, n)))
    return Graph("R", n, 0, finals, tuple(trans))


def random_match(rng: random.Random, doc: str) -> Match:
    start = rng.randrange(0, 50)
    end = start + rng.randrange(1, 6)
    return Match(start, end, start * 3, end * 3, "G", {})


def test_partition_invariant_randomized():
    rng = random.Random(20240811)
    for _ in range(CASES):
        pn = [random_match(rng, "d") for _ in range(rng.randrange(0, 8))]
        svc = [random_match(rng, "d") for _ in range(rng.randrange(0, 5))]
        counts = classify_pn(pn, svc)
        assert counts.pn_with_sv + counts.pn_without_sv == counts.pn_total
        assert 0.0 <= counts.proportion <= 1.0
        # containment monotonicity: adding an svc span never lowers with_sv
        more = classify_pn(pn, svc + [random_match(rng, "d")])
        assert more.pn_with_sv >= counts.pn_with_sv


def test_longest_match_antichain_randomized():
    rng = random.Random(7041992)
    for _ in range(CASES):
        tagged = random_tagged(rng)
        graph = random_flat_graph(rng)
        matches = locate(graph, tagged, "longest")
        starts = [m.start_token for m in matches]
        assert len(starts) == len(set(starts))
        # longest dominates: every "all" span shares a start with a longest
        # span of at least its length
        longest_by_start = {m.start_token: m.end_token for m in matches}
        for m in locate(graph, tagged, "all"):
            assert longest_by_start[m.start_token] >= m.end_token


def test_match_line_bijection_randomized():
    rng = random.Random(5121998)
    for _ in range(CASES):
        tagged = random_tagged(rng)
        graph = random_flat_graph(rng)
        matches = locate(graph, tagged, "all")
        width = rng.randrange(0, 12)
        lines = build_concordance(matches, tagged, width, "doc")
        assert len(lines) == len(matches)
        blob = tagged.source_bytes()
        for line in lines:
            assert line.center == \
                blob[line.match.start_byte:line.match.end_byte].decode("utf-8")
            assert len(line.left) <= width and len(line.right) <= width


def test_sort_idempotence_randomized():
    rng = random.Random(14071789)
    alphabet = "abcdé "
    for _ in range(CASES):
        lines = []
        for _ in range(rng.randrange(0, 9)):
            start = rng.randrange(0, 40)
            text = "".join(rng.choice(alphabet) for _ in range(rng.randrange(0, 6)))
            lines.append(ConcordanceLine(
                Match(0, 1, start, start + 2, "G", {}),
                text[::-1], text or "c", text, rng.choice(["a", "b"])))
        for order in ("text", "center", "left-reversed"):
            once = sort_concordance(lines, order)
            assert sort_concordance(once, order) == once
            assert sorted(id(l) for l in once) == sorted(id(l) for l in lines)


@settings(max_examples=CASES, deadline=None)
@given(n=st.integers(1, 10**6),
       p=st.floats(0.01, 1.0), r=st.floats(0.01, 1.0),
       bump=st.floats(0.01, 0.5))
def test_bias_correct_monotone(n, p, r, bump):
    base = bias_correct(n, p, r)
    if p + bump <= 1.0:
        assert bias_correct(n, p + bump, r) > base
    if r + bump <= 1.0:
        assert bias_correct(n, r=r + bump, p=p) < base
    # linear in n
    assert bias_correct(3 * n, p, r) == pytest.approx(3 * base)


@settings(max_examples=CASES, deadline=None)
@given(n=st.integers(0, 10**6), pr=st.floats(0.01, 1.0))
def test_bias_correct_identity_when_p_equals_r(n, pr):
    assert bias_correct(n, pr, pr) == pytest.approx(n)
