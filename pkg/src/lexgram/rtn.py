"""Recursion-free RTN grammars: loading, flattening, matching.

Graph file (UTF-8, line-oriented, ``#`` comments):

    graph NAME        opens a graph; states are the integers the lines use
    init S            initial state (exactly one per graph)
    final S           accepting state (one or more lines)
    trans FROM TO LABEL

Label syntax:

    "text"            literal surface token, "text"~ compares case-folded
    <spec>            lexical mask, see below
    :Name             call of another graph
    <E>               epsilon

Mask spec: ``[lemma "."] [category] ("+" feat)* ("-" feat)* [":" attrs]
["!" group]``.  A mask matches a token when at least one of the token's
analyses satisfies every constraint: lemma and category equality when
given, required features present, forbidden features absent, and every
attribute character of ``attrs`` occurring in the analysis inflection
code.  Ambiguity is existential on purpose: one analysis must satisfy the
whole mask, but different tokens of a match may rely on different
readings.

``!group`` puts the transition in an agreement group.  Gender (``m``/``f``)
and number (``s``/``p``) are read off the matching analysis's inflection
code and unified with whatever the group already recorded on this path;
analyses lacking an attribute unify with anything.

Flattening inlines every call with fresh state ids, connected by epsilon
transitions, turning the grammar into one plain finite-state graph.  A
direct recursive interpreter over the unflattened grammar is kept as the
reference implementation; both must agree on every match span.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import CycleError, MalformedGraph, UnresolvedCall
from .textproc import TaggedText, TaggedToken

POLICY_LONGEST = "longest"
POLICY_ALL = "all"
POLICY_SHORTEST = "shortest"
POLICIES = (POLICY_LONGEST, POLICY_ALL, POLICY_SHORTEST)


@dataclass(frozen=True)
class Literal:
    surface: str
    fold: bool = False


@dataclass(frozen=True)
class Mask:
    lemma: str | None = None
    category: str | None = None
    required: frozenset[str] = frozenset()
    forbidden: frozenset[str] = frozenset()
    infl_constraint: str = ""
    agree_group: str | None = None


@dataclass(frozen=True)
class Call:
    target: str


class Epsilon:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "<E>"


EPSILON = Epsilon()

Label = object  # Literal | Mask | Call | Epsilon

# bindings: sorted tuple of (group, (gender, number)); hashable per path
Bindings = tuple
EMPTY_BINDINGS: Bindings = ()


@dataclass
class Graph:
    """One named graph; treated as immutable once loaded."""

    name: str
    n_states: int
    initial: int
    finals: frozenset[int]
    transitions: tuple[tuple[int, Label, int], ...]
    _adj: dict | None = field(default=None, repr=False, compare=False)

    def adjacency(self) -> dict[int, list[tuple[Label, int]]]:
        if self._adj is None:
            adj: dict[int, list[tuple[Label, int]]] = {s: [] for s in range(self.n_states)}
            for frm, label, to in self.transitions:
                adj[frm].append((label, to))
            self._adj = adj
        return self._adj

    def call_targets(self) -> list[str]:
        return [label.target for _, label, _ in self.transitions
                if isinstance(label, Call)]


@dataclass
class Grammar:
    graphs: dict[str, Graph]
    main: str


@dataclass
class Match:
    """A recognized token span; byte offsets cover exactly those tokens."""

    start_token: int
    end_token: int
    start_byte: int
    end_byte: int
    grammar: str
    bindings: dict[str, tuple[str | None, str | None]]

    @property
    def span(self) -> tuple[int, int]:
        return (self.start_token, self.end_token)


_GROUP_RE = re.compile(r"^[A-Za-z0-9_-]+$")
_MASK_CORE_RE = re.compile(r"^([A-Za-z0-9]*)((?:[+-][A-Za-z0-9=]+)*)$")


def _parse_mask(inner: str, path: str, lineno: int) -> Mask:
    def bad(reason: str) -> MalformedGraph:
        return MalformedGraph(path, lineno, f"bad mask <{inner}>: {reason}")

    rest = inner
    group = None
    if "!" in rest:
        rest, group = rest.split("!", 1)
        if not _GROUP_RE.match(group):
            raise bad("bad agreement group")
    attrs = ""
    if ":" in rest:
        rest, attrs = rest.split(":", 1)
        if not attrs or not attrs.isalnum():
            raise bad("bad attribute constraint")
    lemma = None
    if "." in rest:
        lemma, rest = rest.split(".", 1)
        if not lemma:
            raise bad("empty lemma")
    core = _MASK_CORE_RE.match(rest)
    if not core:
        raise bad("bad category or feature list")
    category = core.group(1) or None
    required: set[str] = set()
    forbidden: set[str] = set()
    for sign, feat in re.findall(r"([+-])([A-Za-z0-9=]+)", core.group(2)):
        (required if sign == "+" else forbidden).add(feat)
    if lemma is None and category is None and not required:
        raise bad("needs a lemma, a category, or a required feature")
    return Mask(lemma, category, frozenset(required), frozenset(forbidden),
                attrs, group)


def _parse_label(text: str, path: str, lineno: int) -> Label:
    if text == "<E>":
        return EPSILON
    if text.startswith('"'):
        closing = text.find('"', 1)
        if closing == -1:
            raise MalformedGraph(path, lineno, f"unterminated literal {text!r}")
        tail = text[closing + 1:]
        if tail not in ("", "~"):
            raise MalformedGraph(path, lineno, f"trailing junk after literal {text!r}")
        surface = text[1:closing]
        if not surface:
            raise MalformedGraph(path, lineno, "empty literal")
        return Literal(surface, fold=(tail == "~"))
    if text.startswith(":"):
        name = text[1:]
        if not name:
            raise MalformedGraph(path, lineno, "empty call target")
        return Call(name)
    if text.startswith("<") and text.endswith(">") and len(text) > 2:
        return _parse_mask(text[1:-1], path, lineno)
    raise MalformedGraph(path, lineno, f"unrecognized label {text!r}")


def _finish_graph(name: str, path: str, lineno: int, init: int | None,
                  finals: set[int], trans: list[tuple[int, Label, int]]) -> Graph:
    if init is None:
        raise MalformedGraph(path, lineno, f"graph {name!r} has no init state")
    if not finals:
        raise MalformedGraph(path, lineno, f"graph {name!r} has no final state")
    states = {init} | finals
    for frm, _, to in trans:
        states.add(frm)
        states.add(to)
    n_states = max(states) + 1
    graph = Graph(name, n_states, init, frozenset(finals), tuple(trans))

    # a final must be reachable from the initial state
    seen = {init}
    frontier = [init]
    while frontier:
        state = frontier.pop()
        for _, to in graph.adjacency()[state]:
            if to not in seen:
                seen.add(to)
                frontier.append(to)
    if not (seen & graph.finals):
        raise MalformedGraph(path, lineno, f"graph {name!r}: no final reachable")

    # reject epsilon cycles inside one graph so closure needs no step budget
    eps_adj: dict[int, list[int]] = {}
    for frm, label, to in trans:
        if label is EPSILON:
            eps_adj.setdefault(frm, []).append(to)
    color: dict[int, int] = {}

    def dfs(state: int) -> bool:
        color[state] = 1
        for nxt in eps_adj.get(state, ()):
            if color.get(nxt) == 1:
                return True
            if color.get(nxt) is None and dfs(nxt):
                return True
        color[state] = 2
        return False

    for state in list(eps_adj):
        if color.get(state) is None and dfs(state):
            raise MalformedGraph(path, lineno, f"graph {name!r}: epsilon cycle")
    return graph


def parse_graph_file(text: str, path: str = "<string>") -> list[Graph]:
    graphs: list[Graph] = []
    name: str | None = None
    start_line = 0
    init: int | None = None
    finals: set[int] = set()
    trans: list[tuple[int, Label, int]] = []

    def close(lineno: int) -> None:
        nonlocal name
        if name is not None:
            graphs.append(_finish_graph(name, path, start_line, init, finals, trans))
            name = None

    def state_num(token: str, lineno: int) -> int:
        if not token.isdigit():
            raise MalformedGraph(path, lineno, f"bad state {token!r}")
        return int(token)

    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        fields = stripped.split(None, 1)
        keyword = fields[0]
        rest = fields[1] if len(fields) > 1 else ""
        if keyword == "graph":
            close(lineno)
            if not rest:
                raise MalformedGraph(path, lineno, "graph needs a name")
            name = rest.strip()
            start_line = lineno
            init = None
            finals = set()
            trans = []
        elif name is None:
            raise MalformedGraph(path, lineno, f"{keyword!r} before any graph header")
        elif keyword == "init":
            if init is not None:
                raise MalformedGraph(path, lineno, "second init state")
            init = state_num(rest.strip(), lineno)
        elif keyword == "final":
            finals.add(state_num(rest.strip(), lineno))
        elif keyword == "trans":
            parts = rest.split(None, 2)
            if len(parts) != 3:
                raise MalformedGraph(path, lineno, "trans needs FROM TO LABEL")
            frm = state_num(parts[0], lineno)
            to = state_num(parts[1], lineno)
            trans.append((frm, _parse_label(parts[2].strip(), path, lineno), to))
        else:
            raise MalformedGraph(path, lineno, f"unknown directive {keyword!r}")
    close(len(text.splitlines()) + 1)
    if not graphs:
        raise MalformedGraph(path, None, "no graphs in file")
    return graphs


def load_grammar(paths: list[str], main: str | None = None) -> Grammar:
    """Load graph files into one grammar.

    The main graph defaults to the first graph of the first file.  Call
    targets must resolve; the call structure is NOT checked for cycles
    here (see check_recursion).
    """
    graphs: dict[str, Graph] = {}
    first_name: str | None = None
    for path in paths:
        with open(path, "r", encoding="utf-8") as handle:
            for graph in parse_graph_file(handle.read(), str(path)):
                if graph.name in graphs:
                    raise MalformedGraph(str(path), None,
                                         f"duplicate graph {graph.name!r}")
                graphs[graph.name] = graph
                if first_name is None:
                    first_name = graph.name
    main_name = main or first_name
    if main_name not in graphs:
        raise UnresolvedCall(main_name)
    for graph in graphs.values():
        for target in graph.call_targets():
            if target not in graphs:
                raise UnresolvedCall(target)
    return Grammar(graphs, main_name)


def check_recursion(grammar: Grammar) -> CycleError | None:
    """None when the call structure is acyclic, else one cycle as a path."""
    color: dict[str, int] = {}
    stack: list[str] = []

    def dfs(name: str) -> list[str] | None:
        color[name] = 1
        stack.append(name)
        for target in grammar.graphs[name].call_targets():
            if color.get(target) == 1:
                return stack[stack.index(target):] + [target]
            if color.get(target) is None:
                found = dfs(target)
                if found:
                    return found
        stack.pop()
        color[name] = 2
        return None

    for name in grammar.graphs:
        if color.get(name) is None:
            cycle = dfs(name)
            if cycle:
                return CycleError(cycle)
    return None


def flatten(grammar: Grammar) -> Graph:
    """Inline every call; the result recognizes the same label sequences.

    Each call transition is replaced by a fresh copy of the (already
    flattened) callee, wired in with epsilon transitions, so the state
    count is the caller's plus one callee copy per call site.
    """
    err = check_recursion(grammar)
    if err is not None:
        raise err
    cache: dict[str, Graph] = {}

    def build(name: str) -> Graph:
        if name in cache:
            return cache[name]
        g = grammar.graphs[name]
        n = g.n_states
        trans: list[tuple[int, Label, int]] = []
        for frm, label, to in g.transitions:
            if isinstance(label, Call):
                sub = build(label.target)
                base = n
                n += sub.n_states
                trans.append((frm, EPSILON, base + sub.initial))
                for sf, sl, st in sub.transitions:
                    trans.append((base + sf, sl, base + st))
                for fin in sub.finals:
                    trans.append((base + fin, EPSILON, to))
            else:
                trans.append((frm, label, to))
        flat = Graph(g.name, n, g.initial, g.finals, tuple(trans))
        cache[name] = flat
        return flat

    return build(grammar.main)


# ---------------------------------------------------------------------------
# label matching and agreement

def _gender_of(code: str) -> str | None:
    if "m" in code:
        return "m"
    if "f" in code:
        return "f"
    return None


def _number_of(code: str) -> str | None:
    if "s" in code:
        return "s"
    if "p" in code:
        return "p"
    return None


def _unify(bindings: Bindings, group: str, gender: str | None,
           number: str | None) -> Bindings | None:
    items = dict(bindings)
    old_gender, old_number = items.get(group, (None, None))
    if old_gender is not None and gender is not None and old_gender != gender:
        return None
    if old_number is not None and number is not None and old_number != number:
        return None
    items[group] = (old_gender or gender, old_number or number)
    return tuple(sorted(items.items()))


def _satisfies(mask: Mask, analysis) -> bool:
    if mask.lemma is not None and analysis.lemma != mask.lemma:
        return False
    if mask.category is not None and analysis.category != mask.category:
        return False
    if not mask.required <= analysis.sem_features:
        return False
    if mask.forbidden & analysis.sem_features:
        return False
    return all(ch in analysis.infl_code for ch in mask.infl_constraint)


def _label_outcomes(label: Label, ttoken: TaggedToken,
                    bindings: Bindings) -> list[Bindings]:
    """Every distinct binding state a consuming label can reach on a token.

    A non-agreeing label yields at most one outcome; an agreeing mask over
    an ambiguous token can fork into several.
    """
    if isinstance(label, Literal):
        surface = ttoken.token.surface
        ok = (surface.lower() == label.surface.lower()) if label.fold \
            else (surface == label.surface)
        return [bindings] if ok else []
    if isinstance(label, Mask):
        outcomes: list[Bindings] = []
        for analysis in sorted(ttoken.analyses, key=lambda a: a.sort_key):
            if not _satisfies(label, analysis):
                continue
            if label.agree_group is None:
                return [bindings]
            unified = _unify(bindings, label.agree_group,
                             _gender_of(analysis.infl_code),
                             _number_of(analysis.infl_code))
            if unified is not None and unified not in outcomes:
                outcomes.append(unified)
        return outcomes
    raise ValueError(f"label {label!r} does not consume a token")


def match_label(label: Label, tagged_token: TaggedToken,
                bindings: Bindings = EMPTY_BINDINGS) -> Bindings | None:
    """First successful outcome of a consuming label, or None on failure."""
    outcomes = _label_outcomes(label, tagged_token, bindings)
    return outcomes[0] if outcomes else None


# ---------------------------------------------------------------------------
# simulation over flattened graphs

def _closure(graph: Graph, configs: dict) -> dict:
    """Epsilon closure over (state, bindings) configurations, order-stable."""
    adj = graph.adjacency()
    out = dict(configs)
    frontier = list(configs)
    while frontier:
        state, bindings = frontier.pop()
        for label, to in adj[state]:
            if label is EPSILON:
                key = (to, bindings)
                if key not in out:
                    out[key] = None
                    frontier.append(key)
    return out


def _assert_flat(graph: Graph) -> None:
    for _, label, _ in graph.transitions:
        if isinstance(label, Call):
            raise ValueError("locate needs a flattened graph (call label found)")


def _spans_from(graph: Graph, tagged: TaggedText, start: int,
                limit: int, seed: Bindings) -> dict[int, Bindings]:
    """Accepting span ends (exclusive) from one start token, with a
    deterministic representative binding per end."""
    adj = graph.adjacency()
    accepts: dict[int, Bindings] = {}
    configs = _closure(graph, {(graph.initial, seed): None})
    pos = start
    while configs:
        if pos > start:
            finals = [b for (s, b) in configs if s in graph.finals]
            if finals:
                accepts[pos] = min(finals, key=repr)
        if pos >= limit:
            break
        step: dict = {}
        ttoken = tagged.tokens[pos]
        for state, bindings in configs:
            for label, to in adj[state]:
                if label is EPSILON:
                    continue
                for after in _label_outcomes(label, ttoken, bindings):
                    key = (to, after)
                    if key not in step:
                        step[key] = None
        configs = _closure(graph, step)
        pos += 1
    return accepts


def _select(accepts: dict[int, Bindings], policy: str) -> list[int]:
    if not accepts:
        return []
    if policy == POLICY_LONGEST:
        return [max(accepts)]
    if policy == POLICY_SHORTEST:
        return [min(accepts)]
    return sorted(accepts)


def _make_match(tagged: TaggedText, start: int, end: int, name: str,
                bindings: Bindings) -> Match:
    return Match(start, end,
                 tagged.tokens[start].token.start,
                 tagged.tokens[end - 1].token.end,
                 name, dict(bindings))


def locate(flat: Graph, tagged: TaggedText, policy: str = POLICY_LONGEST) -> list[Match]:
    """All matches of a flattened graph over tagged text.

    Simulation runs from every start token, never crosses a sentence
    boundary, and reports spans per policy: the maximal end per start
    (longest), the minimal one (shortest), or every accepting span (all).
    Output is sorted by (start, end).
    """
    if policy not in POLICIES:
        raise ValueError(f"unknown policy {policy!r}")
    _assert_flat(flat)
    matches: list[Match] = []
    for start in range(len(tagged.tokens)):
        limit = tagged.sentence_end(start)
        accepts = _spans_from(flat, tagged, start, limit, EMPTY_BINDINGS)
        for end in _select(accepts, policy):
            matches.append(_make_match(tagged, start, end, flat.name, accepts[end]))
    return matches


def span_accepts(flat: Graph, tagged: TaggedText, start: int, end: int,
                 bindings: Bindings | dict | None = None) -> bool:
    """Whether the graph accepts exactly [start, end), optionally with the
    agreement groups pre-bound.  Used to replay reported matches."""
    seed: Bindings = EMPTY_BINDINGS
    if bindings:
        seed = tuple(sorted(dict(bindings).items()))
    limit = tagged.sentence_end(start)
    if end > limit:
        return False
    accepts = _spans_from(flat, tagged, start, min(end, limit), seed)
    return end in accepts


# ---------------------------------------------------------------------------
# reference interpreter: executes calls by direct descent, no flattening

def _descend(grammar: Grammar, name: str, start: int, limit: int,
             seed: Bindings, tagged: TaggedText) -> dict[tuple[int, Bindings], None]:
    graph = grammar.graphs[name]
    adj = graph.adjacency()
    results: dict[tuple[int, Bindings], None] = {}
    seen: set = set()
    frontier: list[tuple[int, int, Bindings]] = [(graph.initial, start, seed)]
    while frontier:
        state, pos, bindings = frontier.pop()
        key = (state, pos, bindings)
        if key in seen:
            continue
        seen.add(key)
        if state in graph.finals:
            results.setdefault((pos, bindings))
        for label, to in adj[state]:
            if label is EPSILON:
                frontier.append((to, pos, bindings))
            elif isinstance(label, Call):
                for (sub_end, sub_bind) in _descend(grammar, label.target, pos,
                                                    limit, bindings, tagged):
                    frontier.append((to, sub_end, sub_bind))
            elif pos < limit:
                for after in _label_outcomes(label, tagged.tokens[pos], bindings):
                    frontier.append((to, pos + 1, after))
    return results


def locate_recursive(grammar: Grammar, tagged: TaggedText,
                     policy: str = POLICY_LONGEST) -> list[Match]:
    """Reference matcher over the unflattened grammar; must agree with
    locate(flatten(grammar), ...) on every span."""
    if policy not in POLICIES:
        raise ValueError(f"unknown policy {policy!r}")
    err = check_recursion(grammar)
    if err is not None:
        raise err
    matches: list[Match] = []
    for start in range(len(tagged.tokens)):
        limit = tagged.sentence_end(start)
        raw = _descend(grammar, grammar.main, start, limit, EMPTY_BINDINGS, tagged)
        accepts: dict[int, Bindings] = {}
        for (end, bindings) in raw:
            if end <= start:
                continue
            if end not in accepts or repr(bindings) < repr(accepts[end]):
                accepts[end] = bindings
        for end in _select(accepts, policy):
            matches.append(_make_match(tagged, start, end, grammar.main,
                                       accepts[end]))
    return matches
