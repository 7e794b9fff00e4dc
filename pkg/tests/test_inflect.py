from __future__ import annotations

import pytest

from lexgram.errors import LemmaTooShort, MalformedParadigm, UnknownParadigm
from lexgram.inflect import (
    LemmaEntry,
    Rule,
    Paradigm,
    expand_lexicon,
    generate,
    load_lemma_entries,
    load_paradigms,
    parse_lemma_entry,
    parse_paradigm,
)
from lexgram.lexicon import build_index, lookup, serialize_entry

from conftest import fixture_path


# -- paradigm parsing ---------------------------------------------------------

def test_parse_two_rule_paradigm():
    paradigm = parse_paradigm("paradigm N-s: <e>:fs ; s:fp")
    assert paradigm.name == "N-s"
    assert paradigm.rules == (Rule(("<e>",), "fs"), Rule(("s",), "fp"))


def test_parse_delete_then_append():
    paradigm = parse_paradigm("paradigm AL-aux: L x:mp")
    assert paradigm.rules == (Rule(("L", "x"), "mp"),)


def test_duplicate_code_rejected():
    with pytest.raises(MalformedParadigm):
        parse_paradigm("paradigm P: <e>:fs ; s:fs")


@pytest.mark.parametrize("text", [
    "paradigm P: nocolon",
    "paradigm P: <e>:",
    "paradigm P: :fs",
    "rule before any header :fs",
])
def test_malformed_paradigms(text):
    with pytest.raises(MalformedParadigm):
        parse_paradigm(text)


def test_multi_section_file():
    paradigms = load_paradigms([fixture_path("lexicon", "paradigms.par")])
    assert "N-f" in paradigms and "V-er" in paradigms
    assert len(paradigms["V-er"].rules) == 8


# -- generation ---------------------------------------------------------------

def test_generate_noun_pair():
    paradigm = parse_paradigm("paradigm N-s: <e>:fs ; s:fp")
    # hand application: identity then append "s"
    assert set(generate("attention", paradigm)) == {
        ("attention", "fs"), ("attentions", "fp")}


def test_generate_delete_twice_then_append():
    paradigm = Paradigm("X", (Rule(("L", "L", "aux"), "mp"),))
    # hand application: cheval -> cheva -> chev -> chevaux
    assert generate("cheval", paradigm) == [("chevaux", "mp")]


def test_generate_identity_rule():
    paradigm = Paradigm("X", (Rule(("<e>",), "W"),))
    assert generate("faire", paradigm) == [("faire", "W")]


def test_generate_too_short():
    paradigm = Paradigm("X", (Rule(("L", "L"), "x"),))
    with pytest.raises(LemmaTooShort):
        generate("ab", paradigm)


def test_generate_irregular_faire():
    paradigms = load_paradigms([fixture_path("lexicon", "paradigms.par")])
    forms = dict(generate("faire", paradigms["V-faire"]))
    assert forms["fait"] in ("P3s", "Kms")  # same surface under two codes
    pairs = set(generate("faire", paradigms["V-faire"]))
    assert ("font", "P3p") in pairs and ("faisait", "I3s") in pairs


# -- lemma entries and expansion ------------------------------------------------

def test_parse_lemma_entry():
    le = parse_lemma_entry("attention.N+NCA+PN+SV=avoir:N-f")
    assert le.lemma == "attention"
    assert le.category == "N"
    assert "NCA" in le.sem_features
    assert le.paradigm_name == "N-f"


def test_expand_two_rules_two_entries():
    paradigm = parse_paradigm("paradigm N-s: <e>:fs ; s:fp")
    out = expand_lexicon([LemmaEntry("idée", "N", ("PN", "NCA"), "N-s")],
                         {"N-s": paradigm})
    assert [e.form for e in out] == ["idée", "idées"]
    assert all(e.lemma == "idée" and e.infl_codes in (("fs",), ("fp",))
               for e in out)


def test_expand_empty_input():
    assert expand_lexicon([], {}) == []


def test_expand_unknown_paradigm():
    with pytest.raises(UnknownParadigm):
        expand_lexicon([LemmaEntry("x", "N", (), "missing")], {})


def test_expand_error_names_lemma():
    paradigm = Paradigm("X", (Rule(("L", "L", "L"), "x"),))
    with pytest.raises(LemmaTooShort) as err:
        expand_lexicon([LemmaEntry("ab", "N", (), "X")], {"X": paradigm})
    assert "ab" in str(err.value)


def test_expansion_round_trip(run_config):
    """Every generated form must look up back to its source lemma and code."""
    paradigms = load_paradigms(run_config.paradigms)
    lemma_entries = []
    for path in run_config.lemmas:
        lemma_entries.extend(load_lemma_entries(path))
    expanded = expand_lexicon(lemma_entries, paradigms)
    index = build_index(expanded)
    for entry in expanded:
        analyses = lookup(index, entry.form)
        assert any(a.lemma == entry.lemma and a.infl_code == entry.infl_codes[0]
                   for a in analyses), entry


def test_expansion_deterministic(run_config):
    paradigms = load_paradigms(run_config.paradigms)
    lemma_entries = load_lemma_entries(run_config.lemmas[0])
    first = "\n".join(serialize_entry(e)
                      for e in expand_lexicon(lemma_entries, paradigms))
    second = "\n".join(serialize_entry(e)
                       for e in expand_lexicon(lemma_entries, paradigms))
    assert first == second


def test_no_generated_form_is_empty(run_config):
    paradigms = load_paradigms(run_config.paradigms)
    for path in run_config.lemmas:
        for entry in expand_lexicon(load_lemma_entries(path), paradigms):
            assert entry.form
