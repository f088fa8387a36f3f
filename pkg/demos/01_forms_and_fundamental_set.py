"""Forms, graph types and the fundamental set on a few small quivers."""
from quivermod import (
    QuiverPair, analyze_fundamental, cartan_with_unit, classify_graph,
    in_fundamental_set, load_fixture, root_type, tits_form,
)

k3 = QuiverPair.from_edges(["v1", "v2"], [("v1", "v2")] * 3, [1, 1])
fig1, _ = load_fixture("fig1")
dt4, _ = load_fixture("dtilde4plus")

for name, p in [("K3", k3), ("fig1", fig1), ("D~4 plus an arrow", dt4)]:
    q, a = p.quiver, p.alpha
    print(f"{name}: graph {classify_graph(q).name}, alpha {p.vector}")
    print("  Tits form", tits_form(q, a), "  d =", 1 - tits_form(q, a), "  root type", root_type(p))
    print("  (alpha, e_v):", {v: cartan_with_unit(q, a, v) for v in p.vertices})
    print("  in fundamental set:", in_fundamental_set(p))

# fig1 fails at v3, where (alpha, e_v3) = 1 > 0
print()
print("structure of the D~4 example:", analyze_fundamental(dt4).summary())
