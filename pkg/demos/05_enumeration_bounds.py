"""Enumerate small fundamental pairs for d = 2, 3 and check the size bounds."""
import collections
import time

from quivermod import enumerate_affine, enumerate_fundamental, verify_bounds
from quivermod.search import arrow_bound, entry_bound, vertex_bound

for d in (2, 3):
    t = time.perf_counter()
    rows = enumerate_fundamental(d, max_vertices=4, max_arrows=6, max_entry=3)
    counts = collections.Counter(r.minimal_verdict for r in rows)
    rep = verify_bounds(rows)
    print(f"d={d}: {len(rows)} pairs {dict(counts)} in {time.perf_counter() - t:.1f}s")
    print(f"  bounds: vertices <= {vertex_bound(d)}, arrows <= {arrow_bound(d)}, "
          f"entries <= {entry_bound(d)}; passed={rep.passed}")
    small = [r for r in rows if r.minimal_verdict == "MinimalUpToBound"][:3]
    for r in small:
        print("   ", r.pair.vector, [(a.source, a.target) for a in r.pair.quiver.arrows])

for d in (2, 3, 4):
    print(f"affine d={d}:", [(r.pair.vector, len(r.pair.quiver.arrows)) for r in enumerate_affine(d)])
