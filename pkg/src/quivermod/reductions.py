"""The contraction tau_u at a large vertex and the reflection sigma_u at a
small source or sink, with the matching transport of weights."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import PreconditionError, WeightIncompatibleError
from .quiver import Arrow, Quiver, QuiverPair, check_weight

TAU = "TauLarge"
SIGMA_SOURCE = "SigmaSource"
SIGMA_SINK = "SigmaSink"


@dataclass(frozen=True)
class ReductionStep:
    kind: str
    vertex: str
    tau_case: Optional[str] = None

    def __str__(self):
        op = "tau" if self.kind == TAU else "sigma"
        return f"{op}:{self.vertex}"

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "vertex": self.vertex}
        if self.tau_case is not None:
            d["tau_case"] = self.tau_case
        return d


@dataclass(frozen=True)
class ReductionResult:
    pair: QuiverPair
    weight: Optional[dict]
    step: ReductionStep
    degenerate_weight: bool = False


def in_sum(pair: QuiverPair, u) -> int:
    return sum(pair.alpha[a.source] for a in pair.quiver.in_arrows(u))


def out_sum(pair: QuiverPair, u) -> int:
    return sum(pair.alpha[a.target] for a in pair.quiver.out_arrows(u))


def is_large(pair: QuiverPair, u) -> bool:
    q = pair.quiver
    if q.loops(u) or q.degree(u) == 0:
        return False
    return pair.alpha[u] >= max(in_sum(pair, u), out_sum(pair, u))


def is_small_source(pair: QuiverPair, u) -> bool:
    q = pair.quiver
    return (not q.in_arrows(u) and bool(q.out_arrows(u))
            and out_sum(pair, u) > pair.alpha[u])


def is_small_sink(pair: QuiverPair, u) -> bool:
    q = pair.quiver
    return (not q.out_arrows(u) and bool(q.in_arrows(u))
            and in_sum(pair, u) > pair.alpha[u])


def _fresh_id(base: str, taken: set) -> str:
    name, k = base, 1
    while name in taken:
        k += 1
        name = f"{base}#{k}"
    taken.add(name)
    return name


def apply_tau(pair: QuiverPair, u, theta=None) -> ReductionResult:
    """Delete the large vertex u, composing each incoming arrow b with each
    outgoing arrow c into a new arrow ``d(b,c)``."""
    q = pair.quiver
    q.check_vertex(u)
    if not is_large(pair, u):
        raise PreconditionError(f"vertex {u!r} is not large")
    if theta is not None:
        theta = check_weight(q, theta)

    ins = sorted(q.in_arrows(u), key=lambda a: a.id)
    outs = sorted(q.out_arrows(u), key=lambda a: a.id)
    kept = [a for a in q.arrows if a.source != u and a.target != u]
    taken = {a.id for a in kept}
    new = [Arrow(_fresh_id(f"d({b.id},{c.id})", taken), b.source, c.target)
           for b in ins for c in outs]
    verts = tuple(v for v in q.vertices if v != u)
    reduced = QuiverPair(Quiver(verts, tuple(kept + new)),
                         {v: pair.alpha[v] for v in verts})

    if theta is None:
        return ReductionResult(reduced, None, ReductionStep(TAU, u))

    t = theta[u]
    if t > 0:
        if pair.alpha[u] != in_sum(pair, u):
            raise WeightIncompatibleError(
                f"theta({u}) > 0 needs alpha({u}) = incoming sum "
                f"({pair.alpha[u]} != {in_sum(pair, u)}); alpha is not theta-semistable")
        case = "a"
        new_theta = {v: theta[v] + q.multiplicity(v, u) * t for v in verts}
    elif t < 0:
        if pair.alpha[u] != out_sum(pair, u):
            raise WeightIncompatibleError(
                f"theta({u}) < 0 needs alpha({u}) = outgoing sum "
                f"({pair.alpha[u]} != {out_sum(pair, u)}); alpha is not theta-semistable")
        case = "b"
        new_theta = {v: theta[v] + q.multiplicity(u, v) * t for v in verts}
    else:
        case = "c"
        new_theta = {v: theta[v] for v in verts}
    degenerate = all(x == 0 for x in new_theta.values()) and any(theta.values())
    return ReductionResult(reduced, new_theta, ReductionStep(TAU, u, case), degenerate)


def apply_sigma(pair: QuiverPair, u, theta=None) -> ReductionResult:
    """Reflect at a small source or sink: reverse its arrows and replace
    alpha(u) by the complementary value."""
    q = pair.quiver
    q.check_vertex(u)
    if is_small_source(pair, u):
        kind, total = SIGMA_SOURCE, out_sum(pair, u)
    elif is_small_sink(pair, u):
        kind, total = SIGMA_SINK, in_sum(pair, u)
    else:
        raise PreconditionError(f"vertex {u!r} is neither a small source nor a small sink")
    if theta is not None:
        theta = check_weight(q, theta)

    arrows = tuple(a.reversed() if u in (a.source, a.target) else a for a in q.arrows)
    alpha = dict(pair.alpha)
    alpha[u] = total - pair.alpha[u]
    reflected = QuiverPair(Quiver(q.vertices, arrows), alpha)
    step = ReductionStep(kind, u)
    if theta is None:
        return ReductionResult(reflected, None, step)

    t = theta[u]
    new_theta = {}
    for v in q.vertices:
        if v == u:
            new_theta[v] = -t
        elif kind == SIGMA_SINK:
            new_theta[v] = theta[v] + q.multiplicity(v, u) * t
        else:
            new_theta[v] = theta[v] + q.multiplicity(u, v) * t
    degenerate = all(x == 0 for x in new_theta.values()) and any(theta.values())
    return ReductionResult(reflected, new_theta, step, degenerate)


def apply_step(pair: QuiverPair, step: ReductionStep, theta=None) -> ReductionResult:
    if step.kind == TAU:
        return apply_tau(pair, step.vertex, theta)
    return apply_sigma(pair, step.vertex, theta)


def admissible_moves(pair: QuiverPair) -> list:
    """Every tau/sigma step applicable to ``pair``, in vertex order."""
    moves = []
    for v in pair.vertices:
        if is_large(pair, v):
            moves.append(ReductionStep(TAU, v))
        if is_small_source(pair, v):
            moves.append(ReductionStep(SIGMA_SOURCE, v))
        elif is_small_sink(pair, v):
            moves.append(ReductionStep(SIGMA_SINK, v))
    return moves


def parse_op(text: str) -> tuple:
    """'tau:v3' -> ('tau', 'v3')."""
    op, sep, v = text.partition(":")
    if not sep or op not in ("tau", "sigma") or not v:
        raise ValueError(f"bad operation {text!r}; expected tau:<vertex> or sigma:<vertex>")
    return op, v
