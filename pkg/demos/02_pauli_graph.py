"""The commutation graph on Pauli indices and its group orbits.

Nonzero index pairs (a, b) in GF(2^m)^2 are the vertices; two vertices
are adjacent when the corresponding Hermitian Paulis commute.  The graph
is strongly regular, and the Moebius group PSL(2, 2^m) acts on ordered
vertex pairs with orbits labeled by a cheap field invariant.

Run:  python demos/02_pauli_graph.py
"""

from collections import Counter

from kerdock3 import (EdgeKind, FieldContext, census, classify_pair,
                      orbit_invariant, orbit_representative, orbit_states,
                      srg_parameters)
from kerdock3.graph import PauliPair
from kerdock3.pauli import PauliIndex

for m in (2, 3):
    n = 1 << m
    v, k, lam, mu = srg_parameters(m)
    print(f"m={m}: strongly regular graph with "
          f"{v} vertices, degree {k}, lambda={lam}, mu={mu}")

ctx = FieldContext(3)
print("\nfull census at m=3 (every ordered pair classified):")
report = census(ctx)
print(report.to_text())
assert report.matches_closed_form()

print("classification of a few explicit pairs:")
alpha = ctx.alpha_power(1)
for k in (2, 3, None):
    b = 0 if k is None else ctx.alpha_power(k)
    pair = PauliPair(PauliIndex(alpha, 0), PauliIndex(1, b))
    kind = classify_pair(ctx, pair)
    inv = orbit_invariant(ctx, pair)
    print(f"  (alpha,0) with (1,{b:#x}): {kind.name}, invariant {inv.value:#x}")

print("\norbits of the diagonal group action on ordered pairs:")
for kind in (EdgeKind.TYPE1, EdgeKind.TYPE2, EdgeKind.NON_EDGE):
    states = orbit_states(ctx, kind)
    sizes = Counter(report.orbit_sizes[s] for s in states)
    print(f"  {kind.name}: {len(states)} orbits, sizes {dict(sizes)}")
    rep = orbit_representative(ctx, states[0])
    print(f"    representative of {states[0].value:#x}: "
          f"(({rep[0].a:#x},{rep[0].b:#x}), ({rep[1].a:#x},{rep[1].b:#x}))")

total = sum(report.orbit_sizes.values())
print(f"\norbit sizes sum to every ordered pair: {total} = "
      f"{report.enumerated['directed_edges'] + report.enumerated['non_edges']}"
      " (commuting + anticommuting)")
