"""Walk the seven-vertex example through a reflection and a contraction."""
from quivermod import admissible_moves, apply_sigma, apply_tau, emit_dot, load_fixture

first, _ = load_fixture("defn23")
print("start:", first.alpha)
print("moves available:", [str(m) for m in admissible_moves(first)])

second = apply_sigma(first, "u")
print(f"after {second.step}:", second.pair.alpha)

third = apply_tau(second.pair, "w")
print(f"after {third.step}:", third.pair.alpha)
print("new arrows:", [(a.id, a.source, a.target) for a in third.pair.quiver.arrows
                      if a.id.startswith("d(")])
print()
print(emit_dot(third.pair))

# the weight travels along with the pair
pair, theta = load_fixture("fig1")
r = apply_sigma(pair, "v1", theta)
print("fig1 reflected at v1:", r.pair.alpha, "weight", r.weight)
back = apply_sigma(r.pair, "v1", r.weight)
print("reflecting twice gives back the start:", back.pair == pair and back.weight == theta)
