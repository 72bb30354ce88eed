"""Small worked examples used throughout the tests and demos.

Each builder returns a fresh structure; the names describe what the
example demonstrates rather than where it appears.
"""

from .structures import DoublyLabelledTS, KripkeStructure, Lts, TAU


def stuttering_example_ks() -> KripkeStructure:
    """Five-state Kripke structure separating divergence-blind from
    divergence-sensitive stuttering equivalence: t diverges on p while u
    is forced into the q-region."""
    return KripkeStructure(
        states=("s", "t", "u", "x", "y"),
        labelling={"s": {"p"}, "t": {"p"}, "u": {"p"}, "x": {"q"}, "y": {"q"}},
        transitions=(("s", "t"), ("s", "u"), ("t", "t"), ("t", "x"),
                     ("u", "y"), ("y", "y")),
    )


def branching_example_lts() -> Lts:
    """Seven-state LTS on which the three branching-bisimulation variants
    all induce different partitions."""
    return Lts(
        states=("s", "t", "u", "v", "x", "y", "z"),
        actions=(TAU, "a"),
        transitions=((("s", TAU, "t")), ("s", TAU, "u"), ("s", TAU, "v"),
                     ("t", TAU, "t"), ("t", "a", "x"),
                     ("u", "a", "y"), ("v", "a", "z"), ("z", TAU, "z")),
    )


def inconsistent_l2ts_examples() -> tuple:
    """Three doubly labelled systems violating agreement conditions
    (i), (ii) and (iii) respectively."""
    d1 = DoublyLabelledTS(
        states=("n0",),
        labelling={"n0": {"p"}},
        transitions=(("n0", "a", "n0"),),
    )
    d2 = DoublyLabelledTS(
        states=("n0", "n1", "n2"),
        labelling={"n0": {"p"}, "n1": {"q"}, "n2": {"r"}},
        transitions=(("n0", "a", "n1"), ("n0", "a", "n2")),
    )
    d3 = DoublyLabelledTS(
        states=("n0", "n1", "n2"),
        labelling={"n0": {"p"}, "n1": {"q"}, "n2": {"q"}},
        transitions=(("n0", "a", "n1"), ("n0", "b", "n2")),
    )
    return d1, d2, d3


def consistent_l2ts_example() -> DoublyLabelledTS:
    """A four-state doubly labelled system satisfying all three
    agreement conditions."""
    return DoublyLabelledTS(
        states=("n0", "n1", "n2", "n3"),
        labelling={"n0": {"p"}, "n1": {"q"}, "n2": {"q"}, "n3": {"r"}},
        transitions=(("n0", "a", "n1"), ("n0", "a", "n2"), ("n0", "b", "n3"),
                     ("n1", TAU, "n2")),
    )


def deadlock_merge_example_lts() -> Lts:
    """The deadlock-vs-livelock composition example: a deadlocked state
    "0", a livelocked state "Delta0", and a state "a" that performs one
    visible action and then deadlocks at "x"."""
    return Lts(
        states=("0", "Delta0", "a", "x"),
        actions=(TAU, "a"),
        transitions=(("Delta0", TAU, "Delta0"), ("a", "a", "x")),
    )


def deadlock_extension_example_ks() -> KripkeStructure:
    """Kripke structure whose deadlock extension adds exactly the
    transitions q -> sink, r -> sink, sink -> sink."""
    return KripkeStructure(
        states=("p", "q", "r"),
        labelling={"p": {"p"}, "q": {"q"}, "r": {"r"}},
        transitions=(("p", "p"), ("p", "q"), ("p", "r")),
    )


def deadlock_livelock_ks() -> KripkeStructure:
    """Two unlabelled states: d deadlocks, l loops silently forever.

    Stuttering-equivalent as they stand, separated after the deadlock
    extension."""
    return KripkeStructure(
        states=("d", "l"),
        labelling={"d": set(), "l": set()},
        transitions=(("l", "l"),),
    )
