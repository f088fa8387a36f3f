"""Graph types, fundamental-set membership and the structure of fundamental pairs.

Graph classification works on the underlying undirected multigraph and is
purely structural (degree sequences and arm lengths), so it is exact and
independent of orientation.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .errors import DomainError
from .quiver import (
    Quiver, QuiverPair, cartan_with_unit, component_vertex_sets, is_connected,
    tits_form,
)


@dataclass(frozen=True)
class GraphClass:
    kind: str                      # "Dynkin", "ExtendedDynkin" or "Wild"
    family: Optional[str] = None   # "A", "D", "E" for the (extended) Dynkin kinds
    rank: Optional[int] = None

    @property
    def name(self) -> str:
        if self.kind == "Wild":
            return "Wild"
        prefix = "~" if self.kind == "ExtendedDynkin" else ""
        return f"{prefix}{self.family}{self.rank}"

    @property
    def is_dynkin(self) -> bool:
        return self.kind == "Dynkin"

    @property
    def is_wild(self) -> bool:
        return self.kind == "Wild"

    def __str__(self):
        return self.name


WILD = GraphClass("Wild")

# arm lengths (sorted) of a tree with a single branch vertex of degree 3
_STAR_TYPES = {
    (1, 2, 2): GraphClass("Dynkin", "E", 6),
    (1, 2, 3): GraphClass("Dynkin", "E", 7),
    (1, 2, 4): GraphClass("Dynkin", "E", 8),
    (2, 2, 2): GraphClass("ExtendedDynkin", "E", 6),
    (1, 3, 3): GraphClass("ExtendedDynkin", "E", 7),
    (1, 2, 5): GraphClass("ExtendedDynkin", "E", 8),
}


def _simple_adjacency(quiver: Quiver) -> dict:
    adj = {v: set() for v in quiver.vertices}
    for a in quiver.arrows:
        if not a.is_loop:
            adj[a.source].add(a.target)
            adj[a.target].add(a.source)
    return adj


def _arm_length(adj, centre, first) -> int:
    prev, cur, n = centre, first, 1
    while len(adj[cur]) == 2:
        prev, cur = cur, next(w for w in adj[cur] if w != prev)
        n += 1
    return n


def classify_graph(quiver: Quiver) -> GraphClass:
    """Dynkin, extended Dynkin or wild type of the underlying graph.

    The single vertex with one loop is treated as extended type ~A0.
    """
    if not is_connected(quiver):
        raise DomainError("classify_graph needs a connected quiver; split it first")
    verts = quiver.vertices
    n = len(verts)
    loops = sum(1 for a in quiver.arrows if a.is_loop)
    if n == 1:
        if loops == 0:
            return GraphClass("Dynkin", "A", 1)
        return GraphClass("ExtendedDynkin", "A", 0) if loops == 1 else WILD
    if loops:
        return WILD

    edges = {}
    for a in quiver.arrows:
        key = frozenset((a.source, a.target))
        edges[key] = edges.get(key, 0) + 1
    if any(m > 1 for m in edges.values()):
        if n == 2 and list(edges.values()) == [2]:
            return GraphClass("ExtendedDynkin", "A", 1)
        return WILD

    adj = _simple_adjacency(quiver)
    deg = {v: len(adj[v]) for v in verts}
    e = len(edges)
    if e >= n:
        if e == n and all(d == 2 for d in deg.values()):
            return GraphClass("ExtendedDynkin", "A", n - 1)
        return WILD

    # a tree from here on
    maxdeg = max(deg.values())
    if maxdeg <= 2:
        return GraphClass("Dynkin", "A", n)
    if maxdeg >= 5:
        return WILD
    if maxdeg == 4:
        return GraphClass("ExtendedDynkin", "D", 4) if n == 5 else WILD
    branch = [v for v in verts if deg[v] == 3]
    if len(branch) == 1:
        c = branch[0]
        arms = tuple(sorted(_arm_length(adj, c, w) for w in adj[c]))
        if arms[:2] == (1, 1):
            return GraphClass("Dynkin", "D", n)
        return _STAR_TYPES.get(arms, WILD)
    if len(branch) == 2:
        if all(sum(1 for w in adj[b] if deg[w] == 1) == 2 for b in branch):
            return GraphClass("ExtendedDynkin", "D", n - 1)
    return WILD


def in_fundamental_set(pair: QuiverPair) -> bool:
    """alpha != 0, (alpha, e_v) <= 0 everywhere and the support is connected."""
    q, a = pair.quiver, pair.alpha
    supp = [v for v in q.vertices if a[v] > 0]
    if not supp:
        return False
    if any(cartan_with_unit(q, a, v) > 0 for v in q.vertices):
        return False
    return len(component_vertex_sets(q, supp)) == 1


def root_type(pair: QuiverPair) -> str:
    """Label by the Tits form value only; root-ness itself is not checked."""
    t = tits_form(pair.quiver, pair.alpha)
    if t == 1:
        return "real-candidate"
    if t == 0:
        return "isotropic"
    if t < 0:
        return "nonisotropic"
    return "none"


@dataclass
class FundamentalAnalysis:
    q_minus: tuple
    q_plus_components: list            # [(vertices, GraphClass)]
    tied_vertices: tuple
    free_vertices: tuple
    delta_subgraphs: list              # [vertices]
    kappa: int
    mu: Optional[int]
    mu_per_subgraph: dict = field(default_factory=dict)   # vertices -> mu
    cartan_values: dict = field(default_factory=dict)     # v -> (alpha, e_v)

    @property
    def q_plus(self) -> tuple:
        return tuple(v for comp, _ in self.q_plus_components for v in comp)

    def summary(self) -> dict:
        return {
            "q_minus": list(self.q_minus),
            "q_plus_components": [{"vertices": list(c), "graph_class": g.name}
                                  for c, g in self.q_plus_components],
            "tied_vertices": list(self.tied_vertices),
            "free_vertices": list(self.free_vertices),
            "delta_subgraphs": [list(d) for d in self.delta_subgraphs],
            "kappa": self.kappa,
            "mu": self.mu,
        }


def check_fundamental_preconditions(pair: QuiverPair) -> None:
    q = pair.quiver
    if not is_connected(q):
        raise DomainError("analysis needs a connected quiver")
    if not pair.is_sincere:
        raise DomainError("analysis needs a sincere dimension vector")
    if not classify_graph(q).is_wild:
        raise DomainError("analysis needs a wild quiver")
    if not in_fundamental_set(pair):
        raise DomainError("analysis needs alpha in the fundamental set")


def _delta_pieces(quiver: Quiver, comp: tuple, tied: set) -> list:
    """Split one Q^+ component at its tied vertices."""
    if len(comp) == 1:
        return [comp]
    sub = quiver.full_subquiver(comp)
    order = {v: i for i, v in enumerate(quiver.vertices)}
    free = [v for v in comp if v not in tied]
    pieces = []
    for fc in component_vertex_sets(sub, free):
        boundary = {w for v in fc for w in sub.neighbours(v) if w in tied}
        pieces.append(tuple(sorted(set(fc) | boundary, key=order.__getitem__)))
    seen = set()
    for a in sub.arrows:
        if a.source in tied and a.target in tied and not a.is_loop:
            key = frozenset((a.source, a.target))
            if key not in seen:
                seen.add(key)
                pieces.append(tuple(sorted(key, key=order.__getitem__)))
    return pieces


def analyze_fundamental(pair: QuiverPair) -> FundamentalAnalysis:
    check_fundamental_preconditions(pair)
    q, a = pair.quiver, pair.alpha
    cv = {v: cartan_with_unit(q, a, v) for v in q.vertices}
    minus = tuple(v for v in q.vertices if cv[v] < 0)
    plus = [v for v in q.vertices if cv[v] >= 0]
    minus_set = set(minus)
    tied = tuple(v for v in plus if any(w in minus_set for w in q.neighbours(v)))
    tied_set = set(tied)
    free = tuple(v for v in plus if v not in tied_set)

    comps, deltas = [], []
    for comp in component_vertex_sets(q, plus):
        comps.append((comp, classify_graph(q.full_subquiver(comp))))
        deltas.extend(_delta_pieces(q, comp, tied_set))

    mu_per = {}
    for d in deltas:
        vals = [a[v] for v in d if v in tied_set]
        mu_per[d] = max(vals) if vals else None
    mu = max((a[v] for v in tied), default=None)
    return FundamentalAnalysis(minus, comps, tied, free, deltas, len(deltas), mu,
                               mu_per, cv)


def find_constant_a4(pair: QuiverPair) -> Optional[tuple]:
    """A full A4 subgraph v1-v2-v3-v4 with deg(v2) = deg(v3) = 2 and constant alpha."""
    q, a = pair.quiver, pair.alpha

    def thin(v):
        # degree 2 made of two single edges to distinct neighbours
        return q.degree(v) == 2 and q.loops(v) == 0 and len(q.neighbours(v)) == 2

    def joined(x, y):
        return q.multiplicity(x, y) + q.multiplicity(y, x) > 0

    for v2 in q.vertices:
        if not thin(v2):
            continue
        for v3 in q.neighbours(v2):
            if not thin(v3):
                continue
            (v1,) = [w for w in q.neighbours(v2) if w != v3]
            (v4,) = [w for w in q.neighbours(v3) if w != v2]
            if v1 == v4 or q.loops(v1) or q.loops(v4) or joined(v1, v4):
                continue
            if a[v1] == a[v2] == a[v3] == a[v4]:
                return (v1, v2, v3, v4)
    return None


# -- structural inequalities for fundamental pairs -------------------------

def _dynkin_piece_bound(g: GraphClass, mu: int) -> Optional[int]:
    if not g.is_dynkin or mu is None:
        return None
    return {"A": mu, "D": 2 * mu - 1, "E": 3 * mu}[g.family]


def fundamental_bound_violations(pair: QuiverPair,
                                 analysis: Optional[FundamentalAnalysis] = None) -> list:
    """Check the structural inequalities every wild sincere fundamental pair
    must satisfy.  Returns a list of human-readable violation strings (empty
    when everything holds)."""
    q, a = pair.quiver, pair.alpha
    an = analysis or analyze_fundamental(pair)
    t = tits_form(q, a)
    bad = []

    def need(ok, msg):
        if not ok:
            bad.append(msg)

    minus, plus = set(an.q_minus), set(an.q_plus)
    need(minus | plus == set(q.vertices) and not (minus & plus), "partition of vertices")
    for comp, g in an.q_plus_components:
        need(g.is_dynkin, f"Q+ component {comp} is {g.name}, not Dynkin")
    need(len(minus) <= -2 * t, f"|Q-| = {len(minus)} > -2<a,a> = {-2 * t}")
    for v in an.q_minus:
        need(a[v] <= -2 * t, f"alpha({v}) = {a[v]} > {-2 * t} on Q-")
        need(q.degree(v) <= -6 * t, f"deg({v}) = {q.degree(v)} > {-6 * t} on Q-")
    need(len(an.tied_vertices) <= 12 * t * t,
         f"{len(an.tied_vertices)} tied vertices > {12 * t * t}")
    for w in an.tied_vertices:
        need(a[w] <= -6 * t, f"tied alpha({w}) = {a[w]} > {-6 * t}")
    for v in plus:
        for w in q.neighbours(v):
            need(a[w] <= 2 * a[v], f"alpha({w}) = {a[w]} > 2 alpha({v}) = {2 * a[v]}")

    plus_arrows = sum(1 for x in q.arrows if x.source in plus and x.target in plus)
    n0, n1 = len(q.vertices), len(q.arrows)
    need(n0 <= len(plus) - 2 * t, f"|Q0| = {n0} > {len(plus) - 2 * t}")
    mid = plus_arrows - 6 * t * len(minus)
    need(n1 <= mid, f"|Q1| = {n1} > |Q+1| - 6<a,a>|Q-| = {mid}")
    need(mid <= plus_arrows + 12 * t * t, f"{mid} > |Q+1| + 12<a,a>^2")
    need(an.kappa <= 36 * t * t, f"kappa = {an.kappa} > {36 * t * t}")

    for d in an.delta_subgraphs:
        g = classify_graph(q.full_subquiver(d))
        need(g.is_dynkin, f"piece {d} is {g.name}, not Dynkin")
        bound = _dynkin_piece_bound(g, an.mu_per_subgraph.get(d))
        top = max(a[v] for v in d)
        need(bound is not None and top <= bound,
             f"max alpha {top} on piece {d} ({g.name}) exceeds {bound}")

    # arithmetic progressions along degree-2 chains inside Q+
    for v in plus:
        nb = q.neighbours(v)
        if q.degree(v) == 2 and q.loops(v) == 0 and len(nb) == 2 and set(nb) <= plus:
            x, y = nb
            need(2 * a[v] == a[x] + a[y],
                 f"no arithmetic progression through {x}-{v}-{y}")
        if q.degree(v) == 1 and nb and nb[0] in plus:
            need(a[nb[0]] == 2 * a[v], f"end vertex {v}: alpha({nb[0]}) != 2 alpha({v})")
    return bad
