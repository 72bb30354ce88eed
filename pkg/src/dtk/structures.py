"""Core state-graph types: Kripke structures, LTSs, doubly labelled systems.

All values are immutable after construction and safe to share between
threads.  State ids are strings; declaration order is preserved and used
for every deterministic ordering in the toolkit.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

TAU = "tau"
DELTA_PROP = "delta"
DUMMY_PROP = "st"

_ID_RE = re.compile(r"[A-Za-z0-9_.]+\Z")


class FormatError(ValueError):
    """Raised for malformed model text; carries a 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class StructureError(ValueError):
    """Raised when a structure violates its invariants."""


def _dedup(seq):
    seen = set()
    out = []
    for item in seq:
        if item not in seen:
            seen.add(item)
            out.append(item)
    return tuple(out)


@dataclass(frozen=True)
class KripkeStructure:
    """Finite state graph with atomic-proposition labels; may be non-total.

    ``delta_extended`` marks structures produced by the deadlock
    extension; only those may carry the reserved proposition "delta".
    """

    states: tuple
    labelling: dict
    transitions: tuple
    delta_extended: bool = False

    def __post_init__(self):
        object.__setattr__(self, "states", _dedup(self.states))
        declared = set(self.states)
        labelling = {}
        for s in self.states:
            props = frozenset(self.labelling.get(s, ()))
            for p in props:
                if not isinstance(p, str) or not p:
                    raise StructureError(f"bad proposition {p!r} on state {s}")
                if p == DELTA_PROP and not self.delta_extended:
                    raise StructureError(
                        f"reserved proposition {DELTA_PROP!r} on state {s}")
            labelling[s] = props
        object.__setattr__(self, "labelling", labelling)
        for (src, dst) in self.transitions:
            if src not in declared or dst not in declared:
                raise StructureError(f"transition ({src}, {dst}) leaves declared states")
        object.__setattr__(self, "transitions", _dedup(self.transitions))

    def successors(self, s):
        return [t for (u, t) in self.transitions if u == s]

    def label(self, s):
        return self.labelling[s]

    @property
    def propositions(self):
        props = set()
        for ps in self.labelling.values():
            props |= ps
        return props


@dataclass(frozen=True)
class Lts:
    """Finite state graph with action-labelled transitions; "tau" is silent."""

    states: tuple
    actions: tuple
    transitions: tuple

    def __post_init__(self):
        object.__setattr__(self, "states", _dedup(self.states))
        acts = [TAU] + [a for a in self.actions if a != TAU]
        acts += [a for (_, a, _) in self.transitions if a not in acts]
        object.__setattr__(self, "actions", _dedup(acts))
        declared = set(self.states)
        for (src, a, dst) in self.transitions:
            if src not in declared or dst not in declared:
                raise StructureError(f"transition ({src}, {a}, {dst}) leaves declared states")
        object.__setattr__(self, "transitions", _dedup(self.transitions))

    def successors(self, s):
        return [(a, t) for (u, a, t) in self.transitions if u == s]


@dataclass(frozen=True)
class DoublyLabelledTS:
    """State graph carrying both a state labelling and action labels."""

    states: tuple
    labelling: dict
    transitions: tuple
    delta_extended: bool = False

    def __post_init__(self):
        object.__setattr__(self, "states", _dedup(self.states))
        declared = set(self.states)
        labelling = {}
        for s in self.states:
            props = frozenset(self.labelling.get(s, ()))
            for p in props:
                if p == DELTA_PROP and not self.delta_extended:
                    raise StructureError(
                        f"reserved proposition {DELTA_PROP!r} on state {s}")
            labelling[s] = props
        object.__setattr__(self, "labelling", labelling)
        for (src, a, dst) in self.transitions:
            if src not in declared or dst not in declared:
                raise StructureError(f"transition ({src}, {a}, {dst}) leaves declared states")
        object.__setattr__(self, "transitions", _dedup(self.transitions))

    def label(self, s):
        return self.labelling[s]


@dataclass(frozen=True)
class Path:
    """A finite path or a lasso (stem + repeated cycle) of state ids.

    ``cycle`` is empty iff ``kind == "finite"``.  A finite path is maximal
    iff its last state has no outgoing transition in the host structure.
    """

    kind: str
    stem: tuple
    cycle: tuple = ()

    def __post_init__(self):
        if self.kind not in ("finite", "lasso"):
            raise StructureError(f"bad path kind {self.kind!r}")
        if not self.stem:
            raise StructureError("path stem must be nonempty")
        if (self.kind == "finite") != (len(self.cycle) == 0):
            raise StructureError("cycle must be nonempty exactly for lassos")
        object.__setattr__(self, "stem", tuple(self.stem))
        object.__setattr__(self, "cycle", tuple(self.cycle))


def path_is_valid(g, path: Path) -> bool:
    """True iff consecutive states are related by transitions of ``g``."""
    succ = {s: set() for s in g.states}
    if isinstance(g, KripkeStructure):
        for (u, v) in g.transitions:
            succ[u].add(v)
    else:
        for (u, _, v) in g.transitions:
            succ[u].add(v)
    seq = list(path.stem) + list(path.cycle)
    if any(s not in succ for s in seq):
        return False
    for u, v in zip(seq, seq[1:]):
        if v not in succ[u]:
            return False
    if path.kind == "lasso" and path.cycle[0] not in succ[seq[-1]]:
        return False
    return True


def path_is_maximal(g, path: Path) -> bool:
    if path.kind == "lasso":
        return True
    return path.stem[-1] in deadlock_states(g)


@dataclass(frozen=True)
class ConsistencyReport:
    """Outcome of the three-way label/action agreement check on a L2TS."""

    consistent: bool
    violations: tuple

    def violated_conditions(self):
        return sorted({cond for (cond, _) in self.violations})


# ---------------------------------------------------------------------------
# Parsing and rendering
# ---------------------------------------------------------------------------

def _check_id(token, line):
    if not _ID_RE.match(token):
        raise FormatError(f"bad identifier {token!r}", line)
    return token


def _lines(text):
    for i, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        yield i, line.replace("{", " { ").replace("}", " } ").split()


def _parse_state_with_props(tokens, i):
    # state <id> { <prop> ... }
    if len(tokens) < 4 or tokens[2] != "{" or tokens[-1] != "}":
        raise FormatError("expected: state <id> { <prop> ... }", i)
    sid = _check_id(tokens[1], i)
    props = [_check_id(p, i) for p in tokens[3:-1]]
    return sid, props


def parse_ks(text: str, allow_delta: bool = False) -> KripkeStructure:
    """Parse the line-oriented Kripke-structure format.

    Directives: ``state <id> { <prop> ... }`` and ``edge <src> <dst>``.
    '#' starts a comment.  The proposition "delta" is rejected unless
    ``allow_delta`` is set (for re-reading deadlock-extension output).
    """
    states, labelling, edges = [], {}, []
    saw_delta = False
    for i, tokens in _lines(text):
        if tokens[0] == "state":
            sid, props = _parse_state_with_props(tokens, i)
            if sid in labelling:
                raise FormatError(f"duplicate state {sid!r}", i)
            if DELTA_PROP in props:
                if not allow_delta:
                    raise FormatError(
                        f"proposition {DELTA_PROP!r} is reserved", i)
                saw_delta = True
            states.append(sid)
            labelling[sid] = props
        elif tokens[0] == "edge":
            if len(tokens) != 3:
                raise FormatError("expected: edge <src> <dst>", i)
            src, dst = _check_id(tokens[1], i), _check_id(tokens[2], i)
            for endpoint in (src, dst):
                if endpoint not in labelling:
                    raise FormatError(f"undeclared state {endpoint!r}", i)
            edges.append((src, dst))
        else:
            raise FormatError(f"unknown directive {tokens[0]!r}", i)
    return KripkeStructure(tuple(states), labelling, tuple(edges),
                           delta_extended=saw_delta)


def parse_lts(text: str) -> Lts:
    """Parse the LTS format: ``state <id>`` and ``trans <src> <action> <dst>``."""
    states, trans = [], []
    declared = set()
    for i, tokens in _lines(text):
        if tokens[0] == "state":
            if len(tokens) != 2:
                raise FormatError("expected: state <id>", i)
            sid = _check_id(tokens[1], i)
            if sid in declared:
                raise FormatError(f"duplicate state {sid!r}", i)
            declared.add(sid)
            states.append(sid)
        elif tokens[0] == "trans":
            if len(tokens) != 4:
                raise FormatError("expected: trans <src> <action> <dst>", i)
            src = _check_id(tokens[1], i)
            act = _check_id(tokens[2], i)
            dst = _check_id(tokens[3], i)
            for endpoint in (src, dst):
                if endpoint not in declared:
                    raise FormatError(f"undeclared state {endpoint!r}", i)
            trans.append((src, act, dst))
        else:
            raise FormatError(f"unknown directive {tokens[0]!r}", i)
    return Lts(tuple(states), (TAU,), tuple(trans))


def parse_l2ts(text: str, allow_delta: bool = False) -> DoublyLabelledTS:
    """Parse the doubly labelled format: labelled states plus ``trans`` lines."""
    states, labelling, trans = [], {}, []
    saw_delta = False
    for i, tokens in _lines(text):
        if tokens[0] == "state":
            sid, props = _parse_state_with_props(tokens, i)
            if sid in labelling:
                raise FormatError(f"duplicate state {sid!r}", i)
            if DELTA_PROP in props:
                if not allow_delta:
                    raise FormatError(
                        f"proposition {DELTA_PROP!r} is reserved", i)
                saw_delta = True
            states.append(sid)
            labelling[sid] = props
        elif tokens[0] == "trans":
            if len(tokens) != 4:
                raise FormatError("expected: trans <src> <action> <dst>", i)
            src = _check_id(tokens[1], i)
            act = _check_id(tokens[2], i)
            dst = _check_id(tokens[3], i)
            for endpoint in (src, dst):
                if endpoint not in labelling:
                    raise FormatError(f"undeclared state {endpoint!r}", i)
            trans.append((src, act, dst))
        else:
            raise FormatError(f"unknown directive {tokens[0]!r}", i)
    return DoublyLabelledTS(tuple(states), labelling, tuple(trans),
                            delta_extended=saw_delta)


def _sanitize_ids(states):
    """Map arbitrary state ids onto the textual id charset, injectively."""
    mapping = {}
    taken = set()
    for s in states:
        candidate = re.sub(r"[^A-Za-z0-9_.]", ".", s) or "s"
        name = candidate
        k = 2
        while name in taken:
            name = f"{candidate}_{k}"
            k += 1
        taken.add(name)
        mapping[s] = name
    return mapping


def render_ks(k: KripkeStructure) -> str:
    ids = _sanitize_ids(k.states)
    out = []
    for s in k.states:
        props = " ".join(sorted(k.labelling[s]))
        out.append(f"state {ids[s]} {{ {props} }}" if props
                   else f"state {ids[s]} {{}}")
    for (u, v) in k.transitions:
        out.append(f"edge {ids[u]} {ids[v]}")
    return "\n".join(out) + "\n"


def render_lts(l: Lts) -> str:
    ids = _sanitize_ids(l.states)
    out = [f"state {ids[s]}" for s in l.states]
    for (u, a, v) in l.transitions:
        out.append(f"trans {ids[u]} {a} {ids[v]}")
    return "\n".join(out) + "\n"


def render_l2ts(d: DoublyLabelledTS) -> str:
    ids = _sanitize_ids(d.states)
    out = []
    for s in d.states:
        props = " ".join(sorted(d.labelling[s]))
        out.append(f"state {ids[s]} {{ {props} }}" if props
                   else f"state {ids[s]} {{}}")
    for (u, a, v) in d.transitions:
        out.append(f"trans {ids[u]} {a} {ids[v]}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# Projections and checks
# ---------------------------------------------------------------------------

def associated_ks(d: DoublyLabelledTS) -> KripkeStructure:
    """Forget the action labels; duplicate edges collapse."""
    edges = tuple((u, v) for (u, a, v) in d.transitions)
    return KripkeStructure(d.states, d.labelling, edges,
                           delta_extended=d.delta_extended)


def associated_lts(d: DoublyLabelledTS) -> Lts:
    """Forget the state labelling."""
    return Lts(d.states, (TAU,), d.transitions)


def check_consistency(d: DoublyLabelledTS) -> ConsistencyReport:
    """Check the three agreement conditions between labellings.

    (i)   a step is silent iff it connects equally labelled states;
    (ii)  the source label plus the action determine the target label;
    (iii) the source and target labels determine the action.
    Every violated condition is reported with witness transitions.
    """
    lab = d.labelling
    violations = []
    for t in d.transitions:
        (s, a, v) = t
        if (lab[s] == lab[v]) != (a == TAU):
            violations.append(("i", (t,)))
    trans = list(d.transitions)
    for i, t1 in enumerate(trans):
        for t2 in trans[i + 1:]:
            (s1, a1, v1), (s2, a2, v2) = t1, t2
            if a1 == a2 and lab[s1] == lab[s2] and lab[v1] != lab[v2]:
                violations.append(("ii", (t1, t2)))
            if lab[s1] == lab[s2] and lab[v1] == lab[v2] and a1 != a2:
                violations.append(("iii", (t1, t2)))
    return ConsistencyReport(not violations, tuple(violations))


def deadlock_states(g) -> set:
    """States with no outgoing transition at all."""
    has_out = set()
    if isinstance(g, KripkeStructure):
        for (u, _) in g.transitions:
            has_out.add(u)
    else:
        for (u, _, _) in g.transitions:
            has_out.add(u)
    return {s for s in g.states if s not in has_out}


def fresh_name(base: str, taken) -> str:
    """First of base, base_0, base_1, ... not in ``taken``."""
    if base not in taken:
        return base
    i = 0
    while f"{base}_{i}" in taken:
        i += 1
    return f"{base}_{i}"


def disjoint_union_lts(l1: Lts, l2: Lts):
    """Union of two LTSs; clashing right-hand ids get a fresh suffix.

    Returns (lts, map1, map2) where the maps send original ids to ids in
    the union.
    """
    map1 = {s: s for s in l1.states}
    taken = set(l1.states)
    map2 = {}
    for s in l2.states:
        name = fresh_name(s, taken)
        taken.add(name)
        map2[s] = name
    states = tuple(l1.states) + tuple(map2[s] for s in l2.states)
    trans = tuple(l1.transitions) + tuple(
        (map2[u], a, map2[v]) for (u, a, v) in l2.transitions)
    return Lts(states, l1.actions + l2.actions, trans), map1, map2
