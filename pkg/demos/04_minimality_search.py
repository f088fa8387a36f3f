"""Breadth-first search for a reduction sequence that shrinks a pair."""
from quivermod import ClassPredicate, is_tau_sigma_minimal, load_fixture

first, _ = load_fixture("defn23")
rep = is_tau_sigma_minimal(first)
print("seven-vertex example:", rep.verdict, [str(s) for s in rep.witness],
      "explored", rep.explored)
print("  endpoint:", rep.endpoint.alpha)

pair, _ = load_fixture("fig1")
rep = is_tau_sigma_minimal(pair, ClassPredicate.all_sincere(), max_depth=6,
                           max_total_dim=60, keep_trace=True)
print("fig1:", rep.verdict, "explored", rep.explored, "bounds", rep.bounds_used)
for p in rep.trace:
    print("  ", p.vector, "total", p.total)
# every reachable pair keeps three vertices and never drops below the start
