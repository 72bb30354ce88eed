"""Partition refinement for the branching/stuttering equivalence family.

The same signature-refinement engine serves LTSs and Kripke structures.
A round computes, per state, the set of observations reachable through a
run of inert steps inside the state's own block:

  * on an LTS a step ``s -a-> t`` is inert iff ``a`` is silent and ``t``
    lies in the block of ``s``; the observation is ``(a, block(t))``;
  * on a Kripke structure every step to a same-block state is inert and
    the observation is the target block.

Depending on the variant the signature also carries an in-block
divergence bit (an infinite inert run exists) and/or an in-block
completion bit (an inert run reaches a deadlock state or diverges).
Blocks are split by signature until the partition is stable.  The
fixpoint, started from the coarsest admissible partition, is the
coarsest consistent colouring of the respective kind.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .graphs import backward_reach, tarjan_cycle_states
from .structures import KripkeStructure, Lts, TAU, deadlock_states


class EquivVariant(Enum):
    DIVERGENCE_BLIND = "db"
    DIVERGENCE_SENSITIVE = "ds"
    EXPLICIT_DIVERGENCE = "ed"


@dataclass(frozen=True)
class Partition:
    """A colouring of states, canonicalised: block ids are dense and
    assigned by first occurrence in state declaration order."""

    block_of: dict
    blocks: tuple

    @staticmethod
    def from_blocks(blocks, state_order):
        order = {s: i for i, s in enumerate(state_order)}
        keyed = sorted(blocks, key=lambda b: min(order[s] for s in b))
        block_of = {}
        out = []
        for i, b in enumerate(keyed):
            members = tuple(sorted(b, key=lambda s: order[s]))
            out.append(frozenset(members))
            for s in members:
                block_of[s] = i
        covered = set(block_of)
        if covered != set(state_order) or sum(len(b) for b in out) != len(order):
            raise ValueError("blocks do not partition the state set")
        return Partition(block_of, tuple(out))

    def same_block(self, s, t) -> bool:
        return self.block_of[s] == self.block_of[t]

    def block_sets(self):
        return set(self.blocks)

    def restrict(self, states):
        """The induced partition on a subset of the states."""
        keep = set(states)
        blocks = [b & keep for b in self.blocks if b & keep]
        return Partition.from_blocks(blocks, [s for s in states])

    def __len__(self):
        return len(self.blocks)


def meet(p: Partition, q: Partition, state_order) -> Partition:
    """Coarsest partition refining both arguments."""
    groups = {}
    for s in state_order:
        groups.setdefault((p.block_of[s], q.block_of[s]), []).append(s)
    return Partition.from_blocks(groups.values(), state_order)


def join(p: Partition, q: Partition, state_order) -> Partition:
    """Finest partition coarsened by both arguments (union-find)."""
    parent = {s: s for s in state_order}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    for part in (p, q):
        for b in part.blocks:
            members = list(b)
            for s in members[1:]:
                union(members[0], s)
    groups = {}
    for s in state_order:
        groups.setdefault(find(s), []).append(s)
    return Partition.from_blocks(groups.values(), state_order)


def _graph_view(g):
    """Uniform view: (states, edges as (src, action, dst), silent test,
    label map or None)."""
    if isinstance(g, KripkeStructure):
        edges = [(u, None, v) for (u, v) in g.transitions]
        return g.states, edges, (lambda a: True), g.labelling
    if isinstance(g, Lts):
        return g.states, list(g.transitions), (lambda a: a == TAU), None
    raise TypeError(f"unsupported structure {type(g).__name__}")


@dataclass(frozen=True)
class Signature:
    """One refinement-round summary of a state."""

    observations: frozenset
    divergent: bool | None
    completable: bool | None


def _signatures(states, edges, silent, block_of, blocks, variant, dead):
    """Per-state signatures over the given partition."""
    need_div = variant is EquivVariant.EXPLICIT_DIVERGENCE
    need_comp = variant is EquivVariant.DIVERGENCE_SENSITIVE
    out_edges = {s: [] for s in states}
    for (u, a, v) in edges:
        out_edges[u].append((a, v))

    sigs = {}
    for block in blocks:
        members = list(block)
        inert = {s: [] for s in members}
        for s in members:
            for (a, v) in out_edges[s]:
                if silent(a) and block_of[v] == block_of[s]:
                    inert[s].append(v)
        div_set = comp_set = None
        if need_div or need_comp:
            cyc = tarjan_cycle_states(members, inert)
            div_set = backward_reach(cyc, members, inert)
            if need_comp:
                local_dead = {s for s in members if s in dead}
                comp_set = backward_reach(cyc | local_dead, members, inert)
        for s in members:
            own = block_of[s]
            seen = {s}
            frontier = [s]
            obs = set()
            while frontier:
                u = frontier.pop()
                for (a, v) in out_edges[u]:
                    if silent(a) and block_of[v] == own:
                        if v not in seen:
                            seen.add(v)
                            frontier.append(v)
                    else:
                        obs.add((a, block_of[v]))
            sigs[s] = Signature(
                frozenset(obs),
                (s in div_set) if need_div else None,
                (s in comp_set) if need_comp else None,
            )
    return sigs


def _initial_partition(g, variant) -> Partition:
    states, _, _, labels = _graph_view(g)
    if labels is None:
        return Partition.from_blocks([list(states)], states)
    groups = {}
    for s in states:
        groups.setdefault(labels[s], []).append(s)
    return Partition.from_blocks(groups.values(), states)


def refinement_history(g, variant: EquivVariant):
    """All refinement rounds as (partition, signatures) pairs.

    The first entry is the initial partition with no signatures; each
    later entry holds the signatures (computed over the previous
    partition) that produced it.  The last partition is the coarsest
    consistent colouring for the variant.
    """
    states, edges, silent, _ = _graph_view(g)
    order = {s: i for i, s in enumerate(states)}
    dead = deadlock_states(g)
    part = _initial_partition(g, variant)
    history = [(part, None)]
    while True:
        sigs = _signatures(states, edges, silent, part.block_of,
                           part.blocks, variant, dead)
        new_blocks = []
        for block in part.blocks:
            buckets = {}
            for s in sorted(block, key=order.get):
                buckets.setdefault(sigs[s], []).append(s)
            new_blocks.extend(buckets.values())
        new_part = Partition.from_blocks(new_blocks, states)
        if len(new_part) == len(part):
            return history
        history.append((new_part, sigs))
        part = new_part


def coarsest_partition_lts(l: Lts, variant: EquivVariant) -> Partition:
    """Coarsest partition whose colouring is consistent (all variants),
    divergence preserving (explicit divergence) or fully consistent
    (divergence sensitive)."""
    return refinement_history(l, variant)[-1][0]


def coarsest_partition_ks(k: KripkeStructure, variant: EquivVariant) -> Partition:
    """As for LTSs, but colourings must also respect the labelling; the
    refinement starts from the label classes."""
    return refinement_history(k, variant)[-1][0]


def check_colouring_lts(l: Lts, p: Partition, variant: EquivVariant) -> bool:
    """Decide validity of a colouring through the finite per-block
    conditions: equal observation sets (length-three coloured traces),
    plus a uniform divergence or completion bit where the variant asks
    for one."""
    return _check_colouring(l, p, variant)


def check_colouring_ks(k: KripkeStructure, p: Partition,
                       variant: EquivVariant) -> bool:
    return _check_colouring(k, p, variant)


def check_colouring(g, p: Partition, variant: EquivVariant) -> bool:
    return _check_colouring(g, p, variant)


def _check_colouring(g, p, variant):
    states, edges, silent, labels = _graph_view(g)
    if set(p.block_of) != set(states):
        raise ValueError("partition does not cover the state set")
    if labels is not None:
        for block in p.blocks:
            labs = {labels[s] for s in block}
            if len(labs) > 1:
                return False
    sigs = _signatures(states, edges, silent, p.block_of, p.blocks,
                       variant, deadlock_states(g))
    for block in p.blocks:
        if len({sigs[s] for s in block}) > 1:
            return False
    return True


def _set_partitions(items):
    """All partitions of ``items``, via restricted growth strings."""
    n = len(items)
    if n == 0:
        yield []
        return
    rgs = [0] * n

    def emit():
        blocks = {}
        for idx, b in enumerate(rgs):
            blocks.setdefault(b, []).append(items[idx])
        return list(blocks.values())

    while True:
        yield emit()
        i = n - 1
        while i > 0:
            limit = max(rgs[:i]) + 1
            if rgs[i] < limit:
                rgs[i] += 1
                for j in range(i + 1, n):
                    rgs[j] = 0
                break
            i -= 1
        else:
            return


ORACLE_STATE_BOUND = 8


def oracle_coarsest_partition(g, variant: EquivVariant) -> Partition:
    """Brute-force reference: enumerate every partition of the states,
    keep the valid colourings, and fold them with ``join``.

    Validity is closed under join, so the result is the unique coarsest
    valid colouring.  Only meant for small instances."""
    states, _, _, _ = _graph_view(g)
    if len(states) > ORACLE_STATE_BOUND:
        raise ValueError(
            f"oracle limited to {ORACLE_STATE_BOUND} states, got {len(states)}")
    result = None
    for blocks in _set_partitions(list(states)):
        cand = Partition.from_blocks(blocks, states)
        if _check_colouring(g, cand, variant):
            result = cand if result is None else join(result, cand, states)
    if result is None or not _check_colouring(g, result, variant):
        raise AssertionError("no valid colouring found; identity must be valid")
    return result


def divergent_states(g, p: Partition) -> set:
    """States that start an infinite run of inert steps inside their own
    block (silent steps for an LTS, any steps for a Kripke structure)."""
    states, edges, silent, _ = _graph_view(g)
    if set(p.block_of) != set(states):
        raise ValueError("partition does not cover the state set")
    out_edges = {s: [] for s in states}
    for (u, a, v) in edges:
        out_edges[u].append((a, v))
    result = set()
    for block in p.blocks:
        members = list(block)
        inert = {
            s: [v for (a, v) in out_edges[s]
                if silent(a) and p.block_of[v] == p.block_of[s]]
            for s in members
        }
        cyc = tarjan_cycle_states(members, inert)
        result |= backward_reach(cyc, members, inert)
    return result


def equivalent(g, s, t, variant: EquivVariant) -> bool:
    """Same block of the coarsest partition for the variant."""
    states, _, _, _ = _graph_view(g)
    for x in (s, t):
        if x not in states:
            raise ValueError(f"unknown state {x!r}")
    if isinstance(g, KripkeStructure):
        part = coarsest_partition_ks(g, variant)
    else:
        part = coarsest_partition_lts(g, variant)
    return part.same_block(s, t)
