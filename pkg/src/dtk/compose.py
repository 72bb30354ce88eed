"""Interleaving merge and the congruence experiment harness.

The merge of two root states is the reachable fragment of the product in
which either component moves independently.  Product states are rendered
``left|right``; the text renderers map ``|`` into the id charset when a
product is written out.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass

from .equivalences import EquivVariant, coarsest_partition_lts, equivalent
from .generators import random_lts
from .linear import complete_traces
from .structures import Lts, TAU, disjoint_union_lts, fresh_name


def merge(l1: Lts, s, l2: Lts, t):
    """Reachable interleaving product from the pair (s, t).

    Returns (product LTS, root state id).  Transitions are exactly the
    left moves and the right moves; discovery order is breadth-first, so
    output is deterministic.
    """
    for (l, x) in ((l1, s), (l2, t)):
        if x not in set(l.states):
            raise ValueError(f"unknown state {x!r}")
    succ1 = {u: [] for u in l1.states}
    for (u, a, v) in l1.transitions:
        succ1[u].append((a, v))
    succ2 = {u: [] for u in l2.states}
    for (u, a, v) in l2.transitions:
        succ2[u].append((a, v))

    def name(pair):
        return f"{pair[0]}|{pair[1]}"

    root = (s, t)
    states = [name(root)]
    seen = {root}
    trans = []
    queue = deque([root])
    while queue:
        (p, q) = queue.popleft()
        here = name((p, q))
        for (a, p2) in succ1[p]:
            nxt = (p2, q)
            if nxt not in seen:
                seen.add(nxt)
                states.append(name(nxt))
                queue.append(nxt)
            trans.append((here, a, name(nxt)))
        for (a, q2) in succ2[q]:
            nxt = (p, q2)
            if nxt not in seen:
                seen.add(nxt)
                states.append(name(nxt))
                queue.append(nxt)
            trans.append((here, a, name(nxt)))
    product = Lts(tuple(states), l1.actions + l2.actions, tuple(trans))
    return product, name(root)


def merged_pair_system(l1: Lts, s, l2: Lts, t, l3: Lts, s2, l4: Lts, t2):
    """Two merges placed in one LTS so their roots can be compared.

    Returns (union LTS, root of the first merge, root of the second)."""
    left, root_left = merge(l1, s, l2, t)
    right, root_right = merge(l3, s2, l4, t2)
    union, _, map2 = disjoint_union_lts(left, right)
    return union, root_left, map2[root_right]


@dataclass(frozen=True)
class CounterexampleReport:
    """The four verdicts of the deadlock/livelock composition experiment."""

    components_ds_equivalent: bool
    products_ds_equivalent: bool
    products_db_equivalent: bool
    components_ed_equivalent: bool

    @property
    def matches_expected(self) -> bool:
        return (self.components_ds_equivalent
                and not self.products_ds_equivalent
                and self.products_db_equivalent
                and not self.components_ed_equivalent)


def congruence_counterexample() -> CounterexampleReport:
    """Reproduce the failure of divergence-sensitive equivalence under
    merge: the deadlocked and livelocked components are equivalent, their
    compositions with a visible action are not."""
    from .figures import deadlock_merge_example_lts
    l = deadlock_merge_example_lts()
    union, dead_root, live_root = merged_pair_system(
        l, "0", l, "a", l, "Delta0", l, "a")
    return CounterexampleReport(
        components_ds_equivalent=equivalent(
            l, "0", "Delta0", EquivVariant.DIVERGENCE_SENSITIVE),
        products_ds_equivalent=equivalent(
            union, dead_root, live_root, EquivVariant.DIVERGENCE_SENSITIVE),
        products_db_equivalent=equivalent(
            union, dead_root, live_root, EquivVariant.DIVERGENCE_BLIND),
        components_ed_equivalent=equivalent(
            l, "0", "Delta0", EquivVariant.EXPLICIT_DIVERGENCE),
    )


def distinguishing_completion_trace(bound: int = 3):
    """The completion-trace witness behind the counterexample: the
    livelocked product can stay silent forever, the deadlocked one
    cannot.  Returns (traces of deadlocked product, traces of livelocked
    product)."""
    from .figures import deadlock_merge_example_lts
    l = deadlock_merge_example_lts()
    dead_prod, dead_root = merge(l, "0", l, "a")
    live_prod, live_root = merge(l, "Delta0", l, "a")
    dead_traces, dead_exact = complete_traces(dead_prod, dead_root, "trivial", bound)
    live_traces, live_exact = complete_traces(live_prod, live_root, "trivial", bound)
    assert dead_exact and live_exact
    return dead_traces, live_traces


@dataclass(frozen=True)
class SampleReport:
    variant: EquivVariant
    trials: int
    passed: int
    failures: tuple
    seed: int


def congruence_sample(variant: EquivVariant, trials: int, max_states: int,
                      seed: int) -> SampleReport:
    """Random congruence probing: draw equivalent component pairs from
    coarsest partitions and check the merged pairs stay equivalent.

    Meaningful for the divergence-blind and explicit-divergence variants,
    where equivalence is a merge congruence; failures are reported with
    their trial index for reproduction."""
    if variant is EquivVariant.DIVERGENCE_SENSITIVE:
        raise ValueError("divergence-sensitive equivalence is not a congruence")
    rng = random.Random(seed)
    failures = []
    passed = 0
    for trial in range(trials):
        l = random_lts(rng, max_states=max_states)
        part = coarsest_partition_lts(l, variant)
        pairs = [sorted(b)[:2] for b in part.blocks if len(b) >= 2]
        if pairs:
            s, s2 = pairs[rng.randrange(len(pairs))]
        else:
            s = s2 = rng.choice(l.states)
        t = rng.choice(l.states)
        t2_candidates = [u for u in l.states if part.same_block(t, u)]
        t2 = rng.choice(t2_candidates)
        union, left_root, right_root = merged_pair_system(
            l, s, l, t, l, s2, l, t2)
        if equivalent(union, left_root, right_root, variant):
            passed += 1
        else:
            failures.append(f"trial {trial}: {s}|{t} vs {s2}|{t2}")
    return SampleReport(variant, trials, passed, tuple(failures), seed)


@dataclass(frozen=True)
class ProbeReport:
    pair_ed_equivalent: bool
    context_ds_results: tuple
    fresh_action: str
    fresh_context_ds: bool

    @property
    def biconditional_holds(self) -> bool:
        return self.pair_ed_equivalent == self.fresh_context_ds


def fresh_action_context(l: Lts):
    """A two-state context performing one globally fresh action and then
    deadlocking."""
    action = fresh_name("fresh", set(l.actions))
    return Lts(("probe", "probe_end"), (TAU, action),
               (("probe", action, "probe_end"),)), "probe", action


def coarsest_congruence_probe(l: Lts, s, t, contexts=()) -> ProbeReport:
    """Probe the coarsest-congruence characterisation.

    Reports whether s and t are explicit-divergence equivalent, whether
    each supplied context preserves divergence-sensitive equivalence of
    the merged pairs, and whether the canonical fresh-action context
    does.  Expected: explicit-divergence equivalence implies all context
    checks pass, and its failure shows up at the fresh-action context.
    """
    ed = equivalent(l, s, t, EquivVariant.EXPLICIT_DIVERGENCE)
    context_results = []
    for (lc, u) in contexts:
        union, left_root, right_root = merged_pair_system(
            l, s, lc, u, l, t, lc, u)
        context_results.append(equivalent(
            union, left_root, right_root, EquivVariant.DIVERGENCE_SENSITIVE))
    ctx, root, action = fresh_action_context(l)
    union, left_root, right_root = merged_pair_system(
        l, s, ctx, root, l, t, ctx, root)
    fresh_ds = equivalent(union, left_root, right_root,
                          EquivVariant.DIVERGENCE_SENSITIVE)
    return ProbeReport(ed, tuple(context_results), action, fresh_ds)
