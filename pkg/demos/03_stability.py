"""King stability through generic subdimension vectors, checked against random ranks."""
import itertools

from quivermod import (
    QuiverPair, brute_force_embeds, generically_embeds, load_fixture,
    moduli_dimension, stability_verdict,
)


def kronecker(n):
    return QuiverPair.from_edges(["v1", "v2"], [("v1", "v2")] * 2, [n, n])


theta = {"v1": -1, "v2": 1}
for n in range(1, 5):
    v = stability_verdict(kronecker(n), theta)
    print(f"Kronecker ({n},{n}): {v.tag}", f"witness {v.witness}" if v.witness else "")

pair, th = load_fixture("fig1")
print("fig1:", stability_verdict(pair, th).tag, " moduli dimension", moduli_dimension(pair, th))

# compare the recursion with ranks of random linear maps
q, alpha = pair.quiver, pair.alpha
agree = total = 0
for beta in itertools.product(*(range(alpha[v] + 1) for v in q.vertices)):
    b = dict(zip(q.vertices, beta))
    total += 1
    agree += generically_embeds(q, b, alpha) == brute_force_embeds(q, b, alpha)
print(f"recursion vs rank oracle on fig1: {agree}/{total} agree")
