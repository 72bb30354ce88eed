"""Structure transformations and the two formula encodings.

Structure side: midpoint insertion (LTS -> doubly labelled system),
Kripke-to-doubly-labelled encoding, the deadlock extension, and the two
self-loop totalisations.  Formula side: the translations between the
infinite-globally fragment and the deadlock-proposition fragment, which
are semantic inverses across the deadlock extension.
"""

from __future__ import annotations

from . import logic
from .logic import And, ExistsG, ExistsGInf, ExistsUntil, Not, Or, Prop, TRUE
from .structures import (
    DELTA_PROP,
    DUMMY_PROP,
    DoublyLabelledTS,
    KripkeStructure,
    Lts,
    StructureError,
    TAU,
    deadlock_states,
    fresh_name,
)


def eta_midpoint(l: Lts):
    """Insert a labelled midpoint along every visible transition.

    Original states keep their identity and share one dummy proposition;
    the midpoint of an ``a``-transition is labelled ``{a}`` and the two
    replacement transitions both carry ``a``.  Silent transitions are
    untouched.  Returns the doubly labelled system and the (identity)
    injection of original states.
    """
    dummy = DUMMY_PROP
    while dummy in l.actions:
        dummy = fresh_name(DUMMY_PROP, set(l.actions) | {dummy})
    states = list(l.states)
    taken = set(states)
    labelling = {s: {dummy} for s in states}
    trans = []
    for (u, a, v) in l.transitions:
        if a == TAU:
            trans.append((u, a, v))
            continue
        mid = fresh_name(f"m.{u}.{a}.{v}", taken)
        taken.add(mid)
        states.append(mid)
        labelling[mid] = {a}
        trans.append((u, a, mid))
        trans.append((mid, a, v))
    d = DoublyLabelledTS(tuple(states), labelling, tuple(trans))
    injection = {s: s for s in l.states}
    return d, injection


def _action_for(target_label) -> str:
    return "to_" + ".".join(sorted(target_label))


def ks_to_l2ts(k: KripkeStructure) -> DoublyLabelledTS:
    """Label every step by its target's label set (silent when the label
    does not change).  The result is consistent and projects back to
    ``k`` on the Kripke side."""
    trans = []
    for (u, v) in k.transitions:
        if k.labelling[u] == k.labelling[v]:
            trans.append((u, TAU, v))
        else:
            trans.append((u, _action_for(k.labelling[v]), v))
    return DoublyLabelledTS(k.states, dict(k.labelling), tuple(trans),
                            delta_extended=k.delta_extended)


def deadlock_extension(k: KripkeStructure):
    """Add a fresh sink labelled with the deadlock proposition, looped on
    itself and reachable from every deadlock state.  The result is total
    and flagged, enabling the deadlock proposition in formulas.

    Returns (extended structure, sink id).
    """
    if any(DELTA_PROP in props for props in k.labelling.values()):
        raise StructureError(
            f"input already uses the reserved proposition {DELTA_PROP!r}")
    sink = fresh_name("s_delta", set(k.states))
    states = tuple(k.states) + (sink,)
    labelling = dict(k.labelling)
    labelling[sink] = {DELTA_PROP}
    edges = list(k.transitions)
    for d in sorted(deadlock_states(k), key=list(k.states).index):
        edges.append((d, sink))
    edges.append((sink, sink))
    return (KripkeStructure(states, labelling, tuple(edges),
                            delta_extended=True), sink)


def totalize_deadlock_selfloops(k: KripkeStructure) -> KripkeStructure:
    """Add a self-loop to every deadlock state.  Maximal-path validity of
    infinity-free formulas is unchanged."""
    edges = tuple(k.transitions) + tuple(
        (d, d) for d in sorted(deadlock_states(k), key=list(k.states).index))
    return KripkeStructure(k.states, dict(k.labelling), edges,
                           delta_extended=k.delta_extended)


def totalize_all_selfloops(k: KripkeStructure) -> KripkeStructure:
    """Add a self-loop to every state.  Divergence-blind validity on the
    input matches maximal-path validity on the result, and the blind
    stuttering partition becomes the sensitive one."""
    edges = tuple(k.transitions) + tuple((s, s) for s in k.states)
    return KripkeStructure(k.states, dict(k.labelling), edges,
                           delta_extended=k.delta_extended)


# ---------------------------------------------------------------------------
# Formula encodings
# ---------------------------------------------------------------------------

def _expand_eg(sub):
    # maximal-path identity: EG phi = EGinf phi | E(phi U AG phi)
    return Or(ExistsGInf(sub), ExistsUntil(sub, logic.AllG(sub)))


def encode_D(phi):
    """Translate an infinity formula for evaluation on the deadlock
    extension: truth at a state of the original structure equals truth of
    the image at the same state of the extension.

    Negations pick up a "not deadlocked" guard; an infinite-globally
    becomes a globally confined to non-sink states.  Plain globally is
    first expanded through the maximal-path identity.
    """
    if DELTA_PROP in logic.formula_propositions(phi):
        raise logic.FormulaError(
            f"input may not mention {DELTA_PROP!r}")
    return _encode_D(phi)


def _not_delta():
    return Not(Prop(DELTA_PROP))


def _encode_D(phi):
    match phi:
        case Prop(_):
            return phi
        case Not(sub):
            return And((_not_delta(), Not(_encode_D(sub))))
        case And(items):
            return And(tuple(_encode_D(f) for f in items))
        case ExistsUntil(lhs, rhs):
            return ExistsUntil(_encode_D(lhs), _encode_D(rhs))
        case ExistsGInf(sub):
            return ExistsG(And((_not_delta(), _encode_D(sub))))
        case ExistsG(sub):
            return _encode_D(_expand_eg(sub))
    raise logic.FormulaError(f"not a state formula: {phi!r}")


def encode_E(phi):
    """Translate a deadlock-proposition formula back: truth at a non-sink
    state of the extension equals truth of the image at the same state of
    the original structure.

    Until and globally branch on whether their relevant subformula holds
    at the sink; when it does, paths that deadlock in the original
    structure may also serve as witnesses.
    """
    match phi:
        case Prop(name):
            return Not(TRUE) if name == DELTA_PROP else phi
        case Not(sub):
            return Not(encode_E(sub))
        case And(items):
            return And(tuple(encode_E(f) for f in items))
        case ExistsUntil(lhs, rhs):
            base = ExistsUntil(encode_E(lhs), encode_E(rhs))
            if logic.sdelta_eval(rhs):
                # the witness point may be the sink: the original path
                # then runs through lhs-states into a deadlock
                via_deadlock = ExistsUntil(
                    encode_E(lhs),
                    And((Not(ExistsGInf(TRUE)), ExistsG(encode_E(lhs)))))
                return Or(base, via_deadlock)
            return base
        case ExistsG(sub):
            if logic.sdelta_eval(sub):
                return ExistsG(encode_E(sub))
            return ExistsGInf(encode_E(sub))
        case ExistsGInf(sub):
            # the extension is total, so an infinite witness is any
            # maximal witness
            return encode_E(ExistsG(sub))
    raise logic.FormulaError(f"not a state formula: {phi!r}")
