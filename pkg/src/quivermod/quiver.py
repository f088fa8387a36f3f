"""Quivers, dimension vectors, weights and the integer forms attached to them.

A quiver is a finite directed multigraph whose arrows carry their own ids, so
parallel arrows and loops are distinct objects.  Dimension vectors and weights
are plain mappings ``vertex -> int``; they are validated against the vertex set
wherever they enter an operation.  All arithmetic is on Python ints.
"""
from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .errors import DomainError

Vector = Mapping[str, int]


@dataclass(frozen=True)
class Arrow:
    id: str
    source: str
    target: str

    @property
    def is_loop(self) -> bool:
        return self.source == self.target

    def reversed(self) -> "Arrow":
        return Arrow(self.id, self.target, self.source)


@dataclass(frozen=True)
class Quiver:
    """Immutable quiver.  ``vertices`` is ordered; that order is used for
    every vector rendering and every deterministic enumeration."""

    vertices: tuple
    arrows: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(
            self, "arrows",
            tuple(a if isinstance(a, Arrow) else Arrow(*a) for a in self.arrows))
        if not self.vertices:
            raise DomainError("a quiver needs at least one vertex")
        if len(set(self.vertices)) != len(self.vertices):
            raise DomainError(f"duplicate vertex ids in {self.vertices!r}")
        verts = set(self.vertices)
        seen = set()
        for a in self.arrows:
            if a.source not in verts or a.target not in verts:
                raise DomainError(
                    f"arrow {a.id!r} joins {a.source!r} -> {a.target!r}, "
                    "which are not both vertices")
            if a.id in seen:
                raise DomainError(f"duplicate arrow id {a.id!r}")
            seen.add(a.id)

    @classmethod
    def from_edges(cls, vertices: Iterable[str], edges: Iterable[tuple]) -> "Quiver":
        """Build a quiver from ``(source, target)`` pairs, naming arrows a1, a2, ..."""
        arrows = [Arrow(f"a{i}", s, t) for i, (s, t) in enumerate(edges, 1)]
        return cls(tuple(vertices), tuple(arrows))

    # -- cached incidence structure -------------------------------------

    @cached_property
    def index(self) -> dict:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def _out(self) -> dict:
        out = defaultdict(list)
        for a in self.arrows:
            out[a.source].append(a)
        return out

    @cached_property
    def _in(self) -> dict:
        inc = defaultdict(list)
        for a in self.arrows:
            inc[a.target].append(a)
        return inc

    @cached_property
    def _mult(self) -> Counter:
        return Counter((a.source, a.target) for a in self.arrows)

    def check_vertex(self, v) -> None:
        if v not in self.index:
            raise DomainError(f"unknown vertex {v!r}")

    def out_arrows(self, v) -> list:
        self.check_vertex(v)
        return list(self._out.get(v, ()))

    def in_arrows(self, v) -> list:
        self.check_vertex(v)
        return list(self._in.get(v, ()))

    def multiplicity(self, v, w) -> int:
        """Number of arrows ``v -> w``."""
        return self._mult.get((v, w), 0)

    def loops(self, v) -> int:
        return self.multiplicity(v, v)

    def degree(self, v) -> int:
        self.check_vertex(v)
        return len(self._out.get(v, ())) + len(self._in.get(v, ()))

    def neighbours(self, v) -> list:
        """Vertices joined to ``v`` by an edge of the underlying graph (not ``v``)."""
        self.check_vertex(v)
        nb = {a.target for a in self._out.get(v, ())} | {a.source for a in self._in.get(v, ())}
        nb.discard(v)
        return [w for w in self.vertices if w in nb]

    def is_source(self, v) -> bool:
        return not self._in.get(v)

    def is_sink(self, v) -> bool:
        return not self._out.get(v)

    def full_subquiver(self, vertices: Iterable[str]) -> "Quiver":
        keep = set(vertices)
        for v in keep:
            self.check_vertex(v)
        return Quiver(tuple(v for v in self.vertices if v in keep),
                      tuple(a for a in self.arrows if a.source in keep and a.target in keep))

    def reversed(self) -> "Quiver":
        return Quiver(self.vertices, tuple(a.reversed() for a in self.arrows))

    def adjacency_matrix(self) -> np.ndarray:
        """``M[i, j]`` = number of arrows from vertex i to vertex j."""
        n = len(self.vertices)
        m = np.zeros((n, n), dtype=np.int64)
        for (s, t), k in self._mult.items():
            m[self.index[s], self.index[t]] += k
        return m


def _as_int(x, what) -> int:
    if isinstance(x, bool) or not isinstance(x, (int, np.integer)):
        raise DomainError(f"{what} must be an integer, got {x!r}")
    return int(x)


def check_vector(quiver: Quiver, vec: Vector, *, nonnegative: bool = False,
                 name: str = "vector") -> dict:
    """Validate that ``vec`` is defined on exactly the vertices of ``quiver``."""
    if set(vec) != set(quiver.vertices):
        missing = [v for v in quiver.vertices if v not in vec]
        extra = [v for v in vec if v not in quiver.index]
        raise DomainError(f"{name} does not match the vertex set "
                          f"(missing {missing}, unexpected {extra})")
    out = {}
    for v in quiver.vertices:
        x = _as_int(vec[v], f"{name}[{v!r}]")
        if nonnegative and x < 0:
            raise DomainError(f"{name}[{v!r}] = {x} is negative")
        out[v] = x
    return out


def check_weight(quiver: Quiver, theta: Vector) -> dict:
    return check_vector(quiver, theta, name="theta")


@dataclass(frozen=True, eq=False)
class QuiverPair:
    """A quiver together with a dimension vector on it."""

    quiver: Quiver
    alpha: Mapping[str, int]

    def __post_init__(self):
        object.__setattr__(self, "alpha",
                           check_vector(self.quiver, self.alpha, nonnegative=True, name="alpha"))

    @classmethod
    def from_edges(cls, vertices: Sequence[str], edges, alpha: Sequence[int]) -> "QuiverPair":
        q = Quiver.from_edges(vertices, edges)
        return cls(q, dict(zip(q.vertices, alpha)))

    @property
    def vertices(self) -> tuple:
        return self.quiver.vertices

    @property
    def vector(self) -> tuple:
        return tuple(self.alpha[v] for v in self.quiver.vertices)

    @property
    def total(self) -> int:
        """|alpha|, the total dimension."""
        return sum(self.alpha.values())

    @property
    def is_sincere(self) -> bool:
        return all(x > 0 for x in self.alpha.values())

    def __eq__(self, other):
        if not isinstance(other, QuiverPair):
            return NotImplemented
        return self.quiver == other.quiver and self.alpha == other.alpha

    def __hash__(self):
        return hash((self.quiver, self.vector))

    def __repr__(self):
        arrows = ", ".join(f"{a.id}:{a.source}->{a.target}" for a in self.quiver.arrows)
        return f"QuiverPair(alpha={self.alpha}, arrows=[{arrows}])"


# -- forms ---------------------------------------------------------------

def ringel_form(quiver: Quiver, a: Vector, b: Vector) -> int:
    """<a, b> = sum_v a(v) b(v) - sum_arrows a(source) b(target)."""
    a = check_vector(quiver, a, name="a")
    b = check_vector(quiver, b, name="b")
    return (sum(a[v] * b[v] for v in quiver.vertices)
            - sum(a[x.source] * b[x.target] for x in quiver.arrows))


def tits_form(quiver: Quiver, a: Vector) -> int:
    return ringel_form(quiver, a, a)


def cartan_form(quiver: Quiver, a: Vector, b: Vector) -> int:
    """Symmetrised Ringel form (a, b) = <a, b> + <b, a>."""
    return ringel_form(quiver, a, b) + ringel_form(quiver, b, a)


def cartan_matrix(quiver: Quiver) -> np.ndarray:
    m = quiver.adjacency_matrix()
    n = len(quiver.vertices)
    return 2 * np.eye(n, dtype=np.int64) - m - m.T


def unit_vector(quiver: Quiver, v) -> dict:
    quiver.check_vertex(v)
    return {w: int(w == v) for w in quiver.vertices}


def cartan_with_unit(quiver: Quiver, alpha: Vector, v) -> int:
    """(alpha, e_v) computed locally: 2 alpha(v) minus the neighbour sums."""
    quiver.check_vertex(v)
    return (2 * alpha[v]
            - sum(alpha[a.target] for a in quiver.out_arrows(v))
            - sum(alpha[a.source] for a in quiver.in_arrows(v)))


def ringel_with_unit(quiver: Quiver, alpha: Vector, v) -> int:
    """<alpha, e_v> = alpha(v) - sum over arrows into v of alpha(source)."""
    quiver.check_vertex(v)
    return alpha[v] - sum(alpha[a.source] for a in quiver.in_arrows(v))


def unit_with_ringel(quiver: Quiver, alpha: Vector, v) -> int:
    """<e_v, alpha> = alpha(v) - sum over arrows out of v of alpha(target)."""
    quiver.check_vertex(v)
    return alpha[v] - sum(alpha[a.target] for a in quiver.out_arrows(v))


def degree(quiver: Quiver, v) -> int:
    return quiver.degree(v)


def pairing(theta: Vector, alpha: Vector) -> int:
    """sum_v theta(v) alpha(v)."""
    return sum(theta[v] * alpha[v] for v in alpha)


# -- support, components -------------------------------------------------

def restrict_weight(theta: Optional[Vector], vertices: Iterable[str]) -> Optional[dict]:
    if theta is None:
        return None
    return {v: theta[v] for v in vertices}


def support_restrict(pair: QuiverPair, theta: Optional[Vector] = None):
    """Restrict ``pair`` (and ``theta``) to the support of alpha.

    Returns ``(pair', theta')``; arrows touching a zero vertex are dropped.
    """
    if theta is not None:
        theta = check_weight(pair.quiver, theta)
    supp = [v for v in pair.vertices if pair.alpha[v] > 0]
    if not supp:
        raise DomainError("alpha is zero: empty support")
    if len(supp) == len(pair.vertices):
        return pair, theta
    q = pair.quiver.full_subquiver(supp)
    return QuiverPair(q, {v: pair.alpha[v] for v in supp}), restrict_weight(theta, supp)


def component_vertex_sets(quiver: Quiver, vertices: Optional[Iterable[str]] = None) -> list:
    """Connected components of the underlying graph (optionally of the full
    subgraph on ``vertices``), each as a tuple in vertex order."""
    keep = set(quiver.vertices if vertices is None else vertices)
    seen = set()
    comps = []
    for v in quiver.vertices:
        if v not in keep or v in seen:
            continue
        stack, comp = [v], set()
        while stack:
            x = stack.pop()
            if x in comp:
                continue
            comp.add(x)
            stack.extend(w for w in quiver.neighbours(x) if w in keep and w not in comp)
        seen |= comp
        comps.append(tuple(w for w in quiver.vertices if w in comp))
    return comps


def is_connected(quiver: Quiver) -> bool:
    return len(component_vertex_sets(quiver)) == 1


def connected_components(pair: QuiverPair) -> list:
    """Split a pair into its connected components (use :func:`restrict_weight`
    with each component's vertices to split a weight alongside)."""
    out = []
    for comp in component_vertex_sets(pair.quiver):
        out.append(QuiverPair(pair.quiver.full_subquiver(comp),
                              {v: pair.alpha[v] for v in comp}))
    return out


def is_strongly_connected(quiver: Quiver) -> bool:
    def reach(start, step):
        seen, stack = {start}, [start]
        while stack:
            x = stack.pop()
            for w in step(x):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return seen

    v0 = quiver.vertices[0]
    n = len(quiver.vertices)
    return (len(reach(v0, lambda x: [a.target for a in quiver.out_arrows(x)])) == n
            and len(reach(v0, lambda x: [a.source for a in quiver.in_arrows(x)])) == n)


def relabel(pair: QuiverPair, vertex_map: Mapping[str, str],
            arrow_map: Optional[Mapping[str, str]] = None,
            order: Optional[Sequence[str]] = None) -> QuiverPair:
    """Rename vertices (and optionally arrows); ``order`` fixes the new vertex order."""
    q = pair.quiver
    arrow_map = arrow_map or {}
    verts = tuple(order) if order is not None else tuple(vertex_map[v] for v in q.vertices)
    arrows = tuple(Arrow(arrow_map.get(a.id, a.id), vertex_map[a.source], vertex_map[a.target])
                   for a in q.arrows)
    return QuiverPair(Quiver(verts, arrows), {vertex_map[v]: x for v, x in pair.alpha.items()})


# -- canonical form --------------------------------------------------------

def _rank(signatures: list) -> list:
    table = {s: i for i, s in enumerate(sorted(set(signatures)))}
    return [table[s] for s in signatures]


def canonical_key(pair: QuiverPair) -> bytes:
    """Deterministic byte string identifying the isomorphism class of ``pair``.

    Colour refinement on (alpha, loops, degrees) followed by
    individualisation over the first non-singleton cell; the key is the
    lexicographically smallest (alpha, multiplicity matrix) encoding over all
    discrete colourings reached.  Exponential only on highly symmetric inputs.
    """
    q = pair.quiver
    n = len(q.vertices)
    idx = q.index
    mult = [[0] * n for _ in range(n)]
    for a in q.arrows:
        mult[idx[a.source]][idx[a.target]] += 1
    alpha = pair.vector
    out_nb = [[j for j in range(n) if mult[i][j] and j != i] for i in range(n)]
    in_nb = [[j for j in range(n) if mult[j][i] and j != i] for i in range(n)]

    def refine(cols):
        ncol = len(set(cols))
        while True:
            sigs = [(cols[i],
                     tuple(sorted((cols[j], mult[i][j]) for j in out_nb[i])),
                     tuple(sorted((cols[j], mult[j][i]) for j in in_nb[i])))
                    for i in range(n)]
            cols = _rank(sigs)
            k = len(set(cols))
            if k == ncol:
                return cols
            ncol = k

    best = None

    def search(cols):
        nonlocal best
        if len(set(cols)) == n:
            order = sorted(range(n), key=cols.__getitem__)
            enc = (tuple(alpha[i] for i in order),
                   tuple(mult[i][j] for i in order for j in order))
            if best is None or enc < best:
                best = enc
            return
        sizes = Counter(cols)
        target = min(c for c, k in sizes.items() if k > 1)
        for v in range(n):
            if cols[v] == target:
                split = _rank([(cols[i], 0 if i == v else 1) for i in range(n)])
                search(refine(split))

    start = _rank([(alpha[i], mult[i][i], sum(mult[i]), sum(row[i] for row in mult))
                   for i in range(n)])
    search(refine(start))
    avec, mvec = best
    text = f"{n}|{','.join(map(str, avec))}|{','.join(map(str, mvec))}"
    return text.encode("ascii")
