import itertools
import random

import pytest

from dtk import figures
from dtk.equivalences import (
    EquivVariant,
    Partition,
    check_colouring,
    check_colouring_lts,
    coarsest_partition_ks,
    coarsest_partition_lts,
    divergent_states,
    equivalent,
    join,
    meet,
    oracle_coarsest_partition,
    refinement_history,
)
from dtk.generators import random_ks, random_lts
from dtk.structures import KripkeStructure, Lts, TAU

DB = EquivVariant.DIVERGENCE_BLIND
DS = EquivVariant.DIVERGENCE_SENSITIVE
ED = EquivVariant.EXPLICIT_DIVERGENCE

ALL_VARIANTS = (DB, DS, ED)


def blocks_of(p):
    return {frozenset(b) for b in p.blocks}


# --- the worked LTS example ------------------------------------------------

def test_branching_example_divergence_blind():
    p = coarsest_partition_lts(figures.branching_example_lts(), DB)
    assert blocks_of(p) == {frozenset("stuv"), frozenset("xyz")}


def test_branching_example_divergence_sensitive():
    p = coarsest_partition_lts(figures.branching_example_lts(), DS)
    assert blocks_of(p) == {
        frozenset("s"), frozenset("t"), frozenset("uv"), frozenset("xyz")}


def test_branching_example_explicit_divergence():
    p = coarsest_partition_lts(figures.branching_example_lts(), ED)
    assert blocks_of(p) == {
        frozenset("s"), frozenset("t"), frozenset("u"), frozenset("v"),
        frozenset("xy"), frozenset("z")}


def test_single_state_lts_is_one_block():
    l = Lts(("only",), (TAU,), ())
    for v in ALL_VARIANTS:
        assert len(coarsest_partition_lts(l, v)) == 1


# --- the worked Kripke example ---------------------------------------------

def test_stuttering_example_divergence_blind():
    p = coarsest_partition_ks(figures.stuttering_example_ks(), DB)
    assert blocks_of(p) == {frozenset("stu"), frozenset("xy")}


def test_stuttering_example_divergence_sensitive():
    p = coarsest_partition_ks(figures.stuttering_example_ks(), DS)
    assert blocks_of(p) == {
        frozenset("s"), frozenset("t"), frozenset("u"), frozenset("xy")}


def test_two_state_chain_merges_under_explicit_divergence():
    k = KripkeStructure(("a", "b"), {"a": set(), "b": set()}, (("a", "b"),))
    p = coarsest_partition_ks(k, ED)
    assert len(p) == 1


# --- colouring checks -------------------------------------------------------

def test_example_colouring_consistent_but_not_fully():
    l = figures.branching_example_lts()
    colouring = Partition.from_blocks(
        [list("stuv"), list("xyz")], l.states)
    assert check_colouring_lts(l, colouring, DB)
    # t can stay silent forever inside its block, u cannot complete there
    assert not check_colouring_lts(l, colouring, DS)


def test_discrete_partition_valid_for_all_variants():
    l = figures.branching_example_lts()
    discrete = Partition.from_blocks([[s] for s in l.states], l.states)
    for v in ALL_VARIANTS:
        assert check_colouring_lts(l, discrete, v)


def test_check_colouring_rejects_label_mixing_on_ks():
    k = figures.stuttering_example_ks()
    universal = Partition.from_blocks([list(k.states)], k.states)
    for v in ALL_VARIANTS:
        assert not check_colouring(k, universal, v)


# --- divergence -------------------------------------------------------------

def test_divergent_states_in_fully_consistent_colouring():
    l = figures.branching_example_lts()
    colouring = Partition.from_blocks(
        [["s"], ["t"], ["u", "v"], ["x", "y", "z"]], l.states)
    div = divergent_states(l, colouring)
    assert "z" in div
    assert "y" not in div
    assert "t" in div


def test_divergent_states_empty_on_acyclic():
    l = Lts(("a", "b"), (TAU,), (("a", TAU, "b"),))
    p = Partition.from_blocks([["a", "b"]], l.states)
    assert divergent_states(l, p) == set()


def _unrolled_divergence(g, p, state):
    """Independent oracle: in-block inert walk of length |S|+1 exists."""
    if isinstance(g, KripkeStructure):
        steps = [(u, None, v) for (u, v) in g.transitions]
        silent = lambda a: True
    else:
        steps = list(g.transitions)
        silent = lambda a: a == TAU
    inert = {s: [] for s in g.states}
    for (u, a, v) in steps:
        if silent(a) and p.block_of[u] == p.block_of[v]:
            inert[u].append(v)
    frontier = {state}
    for _ in range(len(g.states) + 1):
        frontier = {v for u in frontier for v in inert[u]}
        if not frontier:
            return False
    return True


def test_divergent_states_matches_bounded_unrolling():
    rng = random.Random(101)
    for _ in range(100):
        l = random_lts(rng, max_states=5)
        p = coarsest_partition_lts(l, ED)
        div = divergent_states(l, p)
        for s in l.states:
            assert (s in div) == _unrolled_divergence(l, p, s)


# --- pairwise equivalence ---------------------------------------------------

def test_merge_example_component_equivalences():
    l = figures.deadlock_merge_example_lts()
    assert equivalent(l, "0", "Delta0", DS)
    assert not equivalent(l, "0", "Delta0", ED)
    assert equivalent(l, "0", "0", DB)


def test_equivalent_rejects_unknown_states():
    l = figures.deadlock_merge_example_lts()
    with pytest.raises(ValueError):
        equivalent(l, "0", "nope", DB)


# --- oracle -----------------------------------------------------------------

def test_oracle_agrees_on_branching_example():
    l = figures.branching_example_lts()
    for v in ALL_VARIANTS:
        assert oracle_coarsest_partition(l, v) == coarsest_partition_lts(l, v)


def test_oracle_on_single_state():
    l = Lts(("only",), (TAU,), ())
    for v in ALL_VARIANTS:
        assert len(oracle_coarsest_partition(l, v)) == 1


def test_oracle_rejects_large_inputs():
    states = tuple(f"s{i}" for i in range(9))
    l = Lts(states, (TAU,), ())
    with pytest.raises(ValueError):
        oracle_coarsest_partition(l, DB)


def test_oracle_agreement_random_sample():
    # the acceptance suite runs the full 200-instance sweep; keep a
    # smaller smoke version here
    rng = random.Random(7)
    for _ in range(25):
        l = random_lts(rng, max_states=5)
        k = random_ks(rng, max_states=5)
        for v in ALL_VARIANTS:
            assert oracle_coarsest_partition(l, v) == coarsest_partition_lts(l, v)
            assert oracle_coarsest_partition(k, v) == coarsest_partition_ks(k, v)


# --- structural invariants ----------------------------------------------

def _refines(fine, coarse):
    return all(
        coarse.same_block(s, t)
        for b in fine.blocks
        for s, t in itertools.combinations(sorted(b), 2)
    )


def test_refinement_chain_on_random_systems():
    rng = random.Random(8)
    for _ in range(50):
        l = random_lts(rng, max_states=6)
        p_db = coarsest_partition_lts(l, DB)
        p_ds = coarsest_partition_lts(l, DS)
        p_ed = coarsest_partition_lts(l, ED)
        assert _refines(p_ed, p_ds)
        assert _refines(p_ds, p_db)


def test_ds_and_ed_coincide_without_deadlock():
    rng = random.Random(9)
    seen = 0
    for _ in range(200):
        l = random_lts(rng, max_states=5)
        outgoing = {u for (u, _, _) in l.transitions}
        if set(l.states) - outgoing:
            continue
        seen += 1
        assert coarsest_partition_lts(l, DS) == coarsest_partition_lts(l, ED)
    assert seen >= 10


def test_computed_partition_always_passes_check():
    rng = random.Random(10)
    for _ in range(50):
        l = random_lts(rng, max_states=6)
        k = random_ks(rng, max_states=6)
        for v in ALL_VARIANTS:
            assert check_colouring(l, coarsest_partition_lts(l, v), v)
            assert check_colouring(k, coarsest_partition_ks(k, v), v)


def test_equivalence_laws_by_sampling():
    rng = random.Random(11)
    l = random_lts(rng, max_states=6)
    for v in ALL_VARIANTS:
        for s in l.states:
            assert equivalent(l, s, s, v)
        for s, t in itertools.product(l.states, repeat=2):
            assert equivalent(l, s, t, v) == equivalent(l, t, s, v)
        for s, t, u in itertools.islice(
                itertools.product(l.states, repeat=3), 200):
            if equivalent(l, s, t, v) and equivalent(l, t, u, v):
                assert equivalent(l, s, u, v)


def test_history_starts_trivial_and_refines():
    l = figures.branching_example_lts()
    history = refinement_history(l, ED)
    first, _ = history[0]
    assert len(first) == 1
    sizes = [len(p) for (p, _) in history]
    assert sizes == sorted(sizes)


def test_meet_and_join_are_lattice_bounds():
    l = figures.branching_example_lts()
    p = coarsest_partition_lts(l, ED)
    q = coarsest_partition_lts(l, DB)
    m = meet(p, q, l.states)
    j = join(p, q, l.states)
    assert _refines(m, p) and _refines(m, q)
    assert _refines(p, j) and _refines(q, j)
