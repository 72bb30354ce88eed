"""Model checking with and without deadlock awareness.

Maximal-path semantics lets a deadlocking run witness a globally
formula; the infinite-globally quantifier insists on a genuinely
infinite run.  Distinguishing formulas certify why two states fall into
different equivalence classes.
"""

from dtk import figures
from dtk.equivalences import EquivVariant
from dtk.logic import (
    Semantics,
    check,
    distinguish,
    parse_formula,
    render_formula,
    sat,
)

k = figures.stuttering_example_ks()
print("states:", " ".join(k.states))
print("labels:", {s: sorted(k.labelling[s]) for s in k.states})
print()

for text in ["EG p", "EGinf p", "E (p U q)", "EF q", "AG (p | q)"]:
    phi = parse_formula(text)
    for sem in (Semantics.MAXIMAL_PATH, Semantics.DIVERGENCE_BLIND):
        states = sorted(sat(k, phi, sem))
        print(f"sat({text!r:14s}, {sem.value:3s}) = {{{' '.join(states)}}}")
    print()

print("t can stay on p forever (its silent self-loop), u cannot:")
print("  t |= EG p :", check(k, "t", parse_formula("EG p"),
                             Semantics.MAXIMAL_PATH))
print("  u |= EG p :", check(k, "u", parse_formula("EG p"),
                             Semantics.MAXIMAL_PATH))
print()

print("== distinguishing formulas ==")
for variant in (EquivVariant.DIVERGENCE_BLIND,
                EquivVariant.DIVERGENCE_SENSITIVE):
    phi = distinguish(k, "t", "u", variant)
    if phi is None:
        print(f"{variant.value}: t and u are equivalent; no formula exists")
    else:
        print(f"{variant.value}: separating formula: {render_formula(phi)}")
