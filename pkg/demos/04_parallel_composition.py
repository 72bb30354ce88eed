"""Interleaving composition and the congruence story.

Divergence-sensitive equivalence identifies a deadlocked state with a
livelocked one, but composing each with the same partner produces
distinguishable systems.  Explicit-divergence equivalence repairs this
and is exactly as coarse as compositionality allows.
"""

from dtk import figures
from dtk.compose import (
    coarsest_congruence_probe,
    congruence_counterexample,
    congruence_sample,
    merge,
)
from dtk.equivalences import EquivVariant

l = figures.deadlock_merge_example_lts()
print("component LTS:")
for (u, a, v) in l.transitions:
    print(f"    {u} -{a}-> {v}")
print("state 0 deadlocks; Delta0 loops silently; a acts once then stops")
print()

print("== the two compositions ==")
for root in ("0", "Delta0"):
    prod, start = merge(l, root, l, "a")
    print(f"from {start}:")
    for (u, a, v) in prod.transitions:
        print(f"    {u} -{a}-> {v}")
print()

print("== verdicts ==")
report = congruence_counterexample()
print("components equivalent (divergence sensitive):",
      report.components_ds_equivalent)
print("products   equivalent (divergence sensitive):",
      report.products_ds_equivalent)
print("products   equivalent (divergence blind)    :",
      report.products_db_equivalent)
print("components equivalent (explicit divergence) :",
      report.components_ed_equivalent)
print()

print("== random congruence sampling ==")
for variant in (EquivVariant.DIVERGENCE_BLIND,
                EquivVariant.EXPLICIT_DIVERGENCE):
    sample = congruence_sample(variant, trials=100, max_states=4, seed=7)
    print(f"{variant.value}: {sample.passed}/{sample.trials} merged pairs "
          f"stayed equivalent")
print()

print("== coarsest-congruence probe ==")
probe = coarsest_congruence_probe(l, "0", "Delta0")
print("pair explicit-divergence equivalent:", probe.pair_ed_equivalent)
print(f"fresh context ({probe.fresh_action}) keeps them "
      f"divergence-sensitive equivalent:", probe.fresh_context_ds)
print("biconditional holds:", probe.biconditional_holds)
