"""The deadlock extension and the two formula encodings.

Deadlock and livelock satisfy the same stuttering-equivalence-preserved
formulas, yet behave differently under composition.  Routing every
deadlock into a fresh labelled sink makes the difference observable
while preserving explicit-divergence equivalence of the original states.
"""

from dtk import figures
from dtk.equivalences import EquivVariant, coarsest_partition_ks
from dtk.logic import (
    ExistsGInf,
    Prop,
    Semantics,
    check,
    parse_formula,
    render_formula,
    sat,
    sdelta_eval,
)
from dtk.transforms import deadlock_extension, encode_D, encode_E

MAX = Semantics.MAXIMAL_PATH

print("== deadlock versus livelock ==")
k = figures.deadlock_livelock_ks()
print("states: d (no moves), l (silent self-loop); no labels anywhere")
ds = coarsest_partition_ks(k, EquivVariant.DIVERGENCE_SENSITIVE)
print("divergence-sensitive equivalent before extension:",
      ds.same_block("d", "l"))

d_ext, sink = deadlock_extension(k)
print(f"extension adds sink {sink!r}; transitions:", d_ext.transitions)
db = coarsest_partition_ks(d_ext, EquivVariant.DIVERGENCE_BLIND)
print("equivalent after extension (even divergence-blind):",
      db.same_block("d", "l"))
print()

print("== the sink is decidable without the structure ==")
for text in ["delta", "p", "E (p U delta)", "EG delta"]:
    phi = parse_formula(text)
    print(f"  sink |= {text:14s} -> {sdelta_eval(phi)}")
print()

print("== encoding infinity formulas into deadlock formulas ==")
k2 = figures.deadlock_extension_example_ks()
ext2, _ = deadlock_extension(k2)
phi = ExistsGInf(Prop("p"))
image = encode_D(phi)
print("formula        :", render_formula(phi))
print("encoded image  :", render_formula(image))
for s in k2.states:
    original = check(k2, s, phi, MAX)
    encoded = check(ext2, s, image, MAX)
    print(f"  at {s}: original={original}  encoded-on-extension={encoded}")
print()

print("== and back ==")
psi = parse_formula("E (true U delta)")  # deadlock is reachable
back = encode_E(psi)
print("formula on extension:", render_formula(psi))
print("decoded formula     :", render_formula(back))
print("satisfying states (original structure):",
      sorted(sat(k2, back, MAX)))
