"""Bounded tau/sigma-minimality search, enumeration of fundamental pairs at a
fixed moduli dimension, bound verification, and the affine (theta = 0) side.
"""
from __future__ import annotations

import itertools
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import comb
from typing import Callable, Optional

from .classification import (
    analyze_fundamental, classify_graph, fundamental_bound_violations,
    in_fundamental_set,
)
from .errors import ComplexityError, DomainError
from .quiver import (
    Arrow, Quiver, QuiverPair, canonical_key, is_connected,
    is_strongly_connected, ringel_with_unit, support_restrict, tits_form,
    unit_with_ringel,
)
from .reductions import admissible_moves, apply_step

NOT_MINIMAL = "NotMinimal"
MINIMAL_UP_TO_BOUND = "MinimalUpToBound"
NOT_SEARCHED = "NotSearched"

ENUMERATION_GUARD = 10 ** 7


# -- classes of pairs ------------------------------------------------------

@dataclass(frozen=True)
class ClassPredicate:
    tag: str
    test: Callable = field(compare=False, repr=False)

    def __call__(self, pair: QuiverPair) -> bool:
        return pair.is_sincere and bool(self.test(pair))

    @classmethod
    def all_sincere(cls):
        return cls("AllSincere", lambda p: True)

    @classmethod
    def fundamental_wild_sincere(cls):
        def test(p):
            q = p.quiver
            return is_connected(q) and classify_graph(q).is_wild and in_fundamental_set(p)
        return cls("FundamentalWildSincere", test)

    @classmethod
    def dim2_bounded(cls):
        return cls("Dim2Bounded", lambda p: max(p.alpha.values()) <= 2)

    @classmethod
    def constant_n(cls, n: Optional[int] = None):
        """alpha constant; equal to ``n`` when given."""
        if n is None:
            return cls("ConstantN", lambda p: len(set(p.alpha.values())) == 1)
        return cls(f"ConstantN({n})", lambda p: set(p.alpha.values()) == {n})

    @classmethod
    def dim2_or_constant(cls):
        return cls("Dim2OrConstant",
                   lambda p: max(p.alpha.values()) <= 2 or len(set(p.alpha.values())) == 1)

    @classmethod
    def affine_irreducible(cls):
        return cls("AffineIrreducible", is_affine_irreducible)

    @classmethod
    def custom(cls, predicate: Callable, tag: str = "Custom"):
        return cls(tag, predicate)


# -- minimality search -----------------------------------------------------

@dataclass
class SearchReport:
    verdict: str
    witness: list                  # ReductionSteps, empty unless NotMinimal
    explored: int
    bounds_used: tuple             # (max_depth, max_total_dim)
    endpoint: Optional[QuiverPair] = None
    trace: Optional[list] = None   # explored pairs when requested

    @property
    def is_minimal(self) -> bool:
        return self.verdict == MINIMAL_UP_TO_BOUND

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "witness": [s.to_dict() for s in self.witness],
            "explored": self.explored,
            "bounds_used": {"max_depth": self.bounds_used[0],
                            "max_total_dim": self.bounds_used[1]},
        }


def _improves(start: QuiverPair, end: QuiverPair) -> bool:
    n0, n1 = len(start.vertices), len(end.vertices)
    return n1 < n0 or (n1 == n0 and end.total < start.total)


def is_tau_sigma_minimal(pair: QuiverPair, cls: Optional[ClassPredicate] = None,
                         max_depth: int = 8, max_total_dim: Optional[int] = None,
                         keep_trace: bool = False) -> SearchReport:
    """Breadth-first search over tau/sigma moves for a pair of ``cls`` that has
    fewer vertices, or as many vertices and smaller total dimension.

    Intermediate pairs may lie outside the class.  Pairs whose total
    dimension exceeds ``max_total_dim`` (default 8 |alpha|) are discarded, and
    nothing deeper than ``max_depth`` moves is tried, so a negative answer is
    only ``MinimalUpToBound``.
    """
    if not pair.is_sincere:
        raise DomainError("minimality search needs a sincere dimension vector")
    if max_depth < 1:
        raise DomainError("max_depth must be positive")
    cap = 8 * pair.total if max_total_dim is None else max_total_dim
    if cap < 1:
        raise DomainError("max_total_dim must be positive")
    cls = cls or ClassPredicate.all_sincere()
    bounds = (max_depth, cap)

    seen = {canonical_key(pair)}
    trace = [pair] if keep_trace else None
    queue = deque([(pair, [])])
    while queue:
        node, path = queue.popleft()
        if len(path) >= max_depth:
            continue
        for step in admissible_moves(node):
            child = apply_step(node, step).pair
            if child.total > cap:
                continue
            key = canonical_key(child)
            if key in seen:
                continue
            seen.add(key)
            if keep_trace:
                trace.append(child)
            route = path + [step]
            if _improves(pair, child) and cls(child):
                return SearchReport(NOT_MINIMAL, route, len(seen), bounds, child, trace)
            queue.append((child, route))
    return SearchReport(MINIMAL_UP_TO_BOUND, [], len(seen), bounds, None, trace)


def replay(pair: QuiverPair, steps) -> QuiverPair:
    for s in steps:
        pair = apply_step(pair, s).pair
    return pair


# -- bounds ----------------------------------------------------------------

def vertex_bound(d: int) -> int:
    return 2 * (d - 1) + 36 * (d - 1) ** 2 * (12 * d - 11)


def arrow_bound(d: int) -> int:
    return vertex_bound(d) + 12 * (d - 1) ** 2


def entry_bound(d: int) -> int:
    return 18 * (d - 1)


# -- enumeration -------------------------------------------------------------

@dataclass
class ClassificationRow:
    canonical_key: bytes
    pair: QuiverPair
    d: int
    minimal_verdict: str
    analysis: Optional[dict] = None
    report: Optional[SearchReport] = None


def _names(n):
    return tuple(f"v{i}" for i in range(1, n + 1))


def _quiver_from_counts(n: int, counts: dict) -> Quiver:
    """counts[(i, j)] = number of arrows i -> j (vertex indices)."""
    vs = _names(n)
    arrows, k = [], 0
    for (i, j) in sorted(counts):
        for _ in range(counts[(i, j)]):
            k += 1
            arrows.append(Arrow(f"a{k}", vs[i], vs[j]))
    return Quiver(vs, tuple(arrows))


def _symmetric_key(n: int, edges: dict, alpha) -> bytes:
    """Key of the undirected multigraph (plus alpha): each edge both ways."""
    counts = {}
    for (i, j), m in edges.items():
        counts[(i, j)] = counts.get((i, j), 0) + m
        if i != j:
            counts[(j, i)] = counts.get((j, i), 0) + m
    q = _quiver_from_counts(n, counts)
    return canonical_key(QuiverPair(q, dict(zip(q.vertices, alpha))))


def _compositions(slots: int, lo: int, hi: int):
    """All tuples of ``slots`` nonnegative ints with lo <= sum <= hi."""
    def rec(k, left):
        if k == 0:
            yield ()
            return
        for x in range(left + 1):
            for rest in rec(k - 1, left - x):
                yield (x,) + rest
    for t in rec(slots, hi):
        if sum(t) >= lo:
            yield t


def _undirected_graphs(n: int, max_arrows: int):
    """Connected loop/multi-edge graphs on n vertices up to isomorphism, as
    dicts {(i, j): multiplicity} with i <= j."""
    slots = [(i, j) for i in range(n) for j in range(i, n)]
    seen = set()
    for mults in _compositions(len(slots), max(n - 1, 1) if n > 1 else 0, max_arrows):
        edges = {s: m for s, m in zip(slots, mults) if m}
        if n > 1:
            q = _quiver_from_counts(n, edges)
            if not is_connected(q):
                continue
        key = _symmetric_key(n, edges, (1,) * n)
        if key in seen:
            continue
        seen.add(key)
        yield edges


def _orientations(n: int, edges: dict):
    items = sorted(edges.items())
    choices = [range(m + 1) if i != j else (m,) for (i, j), m in items]
    for pick in itertools.product(*choices):
        counts = {}
        for ((i, j), m), k in zip(items, pick):
            if k:
                counts[(i, j)] = counts.get((i, j), 0) + k
            if m - k:
                counts[(j, i)] = counts.get((j, i), 0) + m - k
        yield counts


def estimate_window(max_vertices: int, max_arrows: int, max_entry: int) -> int:
    total = 0
    for n in range(1, max_vertices + 1):
        slots = n * (n + 1) // 2
        total += comb(max_arrows + slots, slots) * max_entry ** n
    return total


def _search_row(args):
    pair, d, max_depth, max_total_dim = args
    report = is_tau_sigma_minimal(pair, ClassPredicate.fundamental_wild_sincere(),
                                  max_depth=max_depth, max_total_dim=max_total_dim)
    return report


def fundamental_candidates(d: int, max_vertices: int, max_arrows: int, max_entry: int,
                           force: bool = False) -> list:
    """Every connected wild sincere pair with alpha in F_Q and 1 - <a,a> = d in
    the window, one per isomorphism class, as (key, pair)."""
    if d < 2:
        raise DomainError("wild sincere fundamental pairs have d >= 2")
    for name, val in (("max_vertices", max_vertices), ("max_arrows", max_arrows),
                      ("max_entry", max_entry)):
        if val < 1:
            raise DomainError(f"{name} must be positive")
    size = estimate_window(max_vertices, max_arrows, max_entry)
    if size > ENUMERATION_GUARD and not force:
        raise ComplexityError(
            f"window has about {size} (graph, alpha) candidates (limit "
            f"{ENUMERATION_GUARD}); narrow the limits or pass force=True")
    out = []
    for n in range(1, max_vertices + 1):
        for edges in _undirected_graphs(n, max_arrows):
            base = _quiver_from_counts(n, edges)
            if not classify_graph(base).is_wild:
                continue
            seen_alpha = set()
            for alpha in itertools.product(range(1, max_entry + 1), repeat=n):
                p = QuiverPair(base, dict(zip(base.vertices, alpha)))
                if 1 - tits_form(base, p.alpha) != d or not in_fundamental_set(p):
                    continue
                skey = _symmetric_key(n, edges, alpha)
                if skey in seen_alpha:
                    continue
                seen_alpha.add(skey)
                seen_orient = set()
                for counts in _orientations(n, edges):
                    q = _quiver_from_counts(n, counts)
                    pair = QuiverPair(q, dict(zip(q.vertices, alpha)))
                    key = canonical_key(pair)
                    if key not in seen_orient:
                        seen_orient.add(key)
                        out.append((key, pair))
    out.sort(key=lambda kp: (len(kp[1].vertices), len(kp[1].quiver.arrows), kp[0]))
    return out


def enumerate_fundamental(d: int, max_vertices: int, max_arrows: int, max_entry: int,
                          max_depth: int = 8, max_total_dim: Optional[int] = None,
                          jobs: int = 1, search: bool = True,
                          force: bool = False) -> list:
    """ClassificationRows for the window, each with a minimality verdict
    (unless ``search`` is off).  ``jobs > 1`` runs the searches in worker
    processes; the result order does not depend on it."""
    cands = fundamental_candidates(d, max_vertices, max_arrows, max_entry, force=force)
    reports = [None] * len(cands)
    if search:
        work = [(p, d, max_depth, max_total_dim) for _, p in cands]
        if jobs > 1 and len(work) > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                reports = list(pool.map(_search_row, work, chunksize=8))
        else:
            reports = [_search_row(w) for w in work]
    rows = []
    for (key, pair), rep in zip(cands, reports):
        rows.append(ClassificationRow(
            key, pair, d, rep.verdict if rep else NOT_SEARCHED,
            analyze_fundamental(pair).summary(), rep))
    return rows


@dataclass
class BoundsReport:
    checked: int = 0
    minimal_checked: int = 0
    violations: list = field(default_factory=list)   # (pair, message)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "rows_checked": self.checked,
            "minimal_rows_checked": self.minimal_checked,
            "violations": [{"pair": repr(p), "message": m} for p, m in self.violations],
        }


def verify_bounds(rows) -> BoundsReport:
    """Check the structural inequalities on every row and the size bounds
    (vertices, arrows, largest entry in terms of d) on minimal rows."""
    rep = BoundsReport()
    for row in rows:
        pair = row.pair
        d = 1 - tits_form(pair.quiver, pair.alpha)
        rep.checked += 1
        if d != row.d:
            rep.violations.append((pair, f"row says d = {row.d}, pair has d = {d}"))
        for msg in fundamental_bound_violations(pair):
            rep.violations.append((pair, msg))
        if row.minimal_verdict != MINIMAL_UP_TO_BOUND:
            continue
        rep.minimal_checked += 1
        n0, n1 = len(pair.vertices), len(pair.quiver.arrows)
        top = max(pair.alpha.values())
        if n0 > vertex_bound(d):
            rep.violations.append((pair, f"|Q0| = {n0} > {vertex_bound(d)}"))
        if n1 > arrow_bound(d):
            rep.violations.append((pair, f"|Q1| = {n1} > {arrow_bound(d)}"))
        if top > entry_bound(d):
            rep.violations.append((pair, f"max alpha = {top} > {entry_bound(d)}"))
    return rep


# -- affine quotients --------------------------------------------------------

def _is_oriented_cycle(q: Quiver) -> bool:
    return all(len(q.in_arrows(v)) == 1 and len(q.out_arrows(v)) == 1
               for v in q.vertices) and is_strongly_connected(q)


def is_simple_dimvector(pair: QuiverPair) -> bool:
    """Whether the general representation of dimension alpha is simple."""
    if pair.total == 0:
        return False
    p, _ = support_restrict(pair)
    q, a = p.quiver, p.alpha
    if len(q.vertices) == 1 and not q.arrows:
        return a[q.vertices[0]] == 1
    if not is_strongly_connected(q):
        return False
    if _is_oriented_cycle(q):
        return set(a.values()) == {1}
    return all(ringel_with_unit(q, a, v) <= 0 and unit_with_ringel(q, a, v) <= 0
               for v in q.vertices)


def affine_reduction_applicable(pair: QuiverPair, v) -> bool:
    q, a = pair.quiver, pair.alpha
    return ringel_with_unit(q, a, v) >= 0 or unit_with_ringel(q, a, v) >= 0


def _is_one_loop(q: Quiver) -> bool:
    return len(q.vertices) == 1 and len(q.arrows) == 1


def is_affine_irreducible(pair: QuiverPair) -> bool:
    q = pair.quiver
    return (pair.is_sincere and is_strongly_connected(q) and not _is_one_loop(q)
            and not any(affine_reduction_applicable(pair, v) for v in q.vertices))


def affine_envelope(d: int) -> tuple:
    """(max vertices, max total dimension, max arrows) for moduli dimension d."""
    return d - 1, d - 1, 2 * (d - 1)


def enumerate_affine(d: int, max_vertices: Optional[int] = None,
                     max_arrows: Optional[int] = None, max_total: Optional[int] = None,
                     force: bool = False) -> list:
    """All irreducible pairs (strongly connected, not the one-loop quiver,
    sincere, no applicable reduction) with 1 - <a,a> = d, inside the size
    envelope for d, optionally narrowed further."""
    if d < 1:
        raise DomainError("d must be positive")
    nv, nt, na = affine_envelope(d)
    nv = nv if max_vertices is None else min(nv, max_vertices)
    na = na if max_arrows is None else min(na, max_arrows)
    nt = nt if max_total is None else min(nt, max_total)
    size = sum(comb(na + n * n, n * n) * comb(nt, n) for n in range(1, nv + 1))
    if size > ENUMERATION_GUARD and not force:
        raise ComplexityError(f"affine window has about {size} candidates; pass force=True")
    rows, seen = [], set()
    for n in range(1, nv + 1):
        slots = [(i, j) for i in range(n) for j in range(n)]
        for mults in _compositions(len(slots), n if n > 1 else 0, na):
            counts = {s: m for s, m in zip(slots, mults) if m}
            q = _quiver_from_counts(n, counts)
            if not is_strongly_connected(q) or _is_one_loop(q):
                continue
            for alpha in _bounded_sincere(n, nt):
                pair = QuiverPair(q, dict(zip(q.vertices, alpha)))
                if 1 - tits_form(q, pair.alpha) != d or not is_affine_irreducible(pair):
                    continue
                key = canonical_key(pair)
                if key in seen:
                    continue
                seen.add(key)
                rows.append(ClassificationRow(key, pair, d, NOT_SEARCHED))
    rows.sort(key=lambda r: (len(r.pair.vertices), len(r.pair.quiver.arrows), r.canonical_key))
    return rows


def _bounded_sincere(n: int, total: int):
    for alpha in itertools.product(range(1, total + 1), repeat=n):
        if sum(alpha) <= total:
            yield alpha
