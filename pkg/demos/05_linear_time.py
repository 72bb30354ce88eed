"""Linear-time views: completion traces, trace equivalences, and path
formulas on lassos.

Completion markers record how a run ends: deadlock, silent divergence,
or an ultimately periodic visible loop.  Erasing or keeping the markers
gives the whole family of trace equivalences.
"""

from dtk import figures
from dtk.compose import merge
from dtk.linear import (
    PInfinity,
    PProp,
    PUntil,
    TraceVariant,
    complete_traces,
    distinguish_ltl,
    eval_path_formula,
    interleave_trace_sets,
    trace_equiv,
)
from dtk.structures import Path

MARKS = {"deadlock": ".", "divergence": "~", "lasso": "@", "open": "?"}


def show(traces):
    lines = []
    for t in sorted(traces, key=lambda t: (len(t.items), repr(t.items))):
        actions = " ".join(str(a) for a in t.items[1::2]) or "(empty)"
        lines.append(f"    {actions} {MARKS[t.end]}")
    return "\n".join(lines)


l = figures.deadlock_merge_example_lts()
print("== completion traces of the two compositions ==")
for root in ("0", "Delta0"):
    prod, start = merge(l, root, l, "a")
    traces, exhausted = complete_traces(prod, start, "trivial", 5)
    print(f"{start} (exhausted={exhausted}):")
    print(show(traces))
print()

print("== trace equivalences on the components ==")
for variant in TraceVariant:
    verdict = trace_equiv(l, "0", "Delta0", variant)
    print(f"0 vs Delta0 under {variant.name:16s}: equal={verdict.equal} "
          f"exact={verdict.exact}")
print()

print("== path formulas on a lasso ==")
k = figures.stuttering_example_ks()
divergent_path = Path("lasso", ("t",), ("t",))
exit_path = Path("finite", ("t", "x"))
psi = PUntil(PProp("p"), PProp("q"))
print("p U q on the divergent lasso :",
      eval_path_formula(k, psi, divergent_path))
print("p U q on the exiting run     :",
      eval_path_formula(k, psi, exit_path))
print("infinity on both             :",
      eval_path_formula(k, PInfinity(), divergent_path),
      eval_path_formula(k, PInfinity(), exit_path))
print()

print("== a linear-time separating formula ==")
witness = distinguish_ltl(k, "t", "u", with_infinity=False)
print(f"every maximal path from {witness.holds_from} satisfies the witness;")
print(f"some maximal path from {witness.fails_from} falsifies it:")
print("   ", witness.formula)
print()

print("== interleaving marked trace sets ==")
left, _ = complete_traces(l, "0", "trivial", 5)
right, _ = complete_traces(l, "a", "trivial", 5)
print("traces(0) interleaved with traces(a):")
print(show(interleave_trace_sets(left, right)))
