"""Acceptance criteria. Each test prints one PASS/FAIL line with its wall time and limit."""
import itertools
import random
import time
from contextlib import contextmanager

from quivermod import (
    QuiverPair, WeightIncompatibleError, admissible_moves, analyze_fundamental,
    apply_sigma, apply_step, apply_tau, brute_force_embeds, canonical_key,
    canonical_weight, cartan_with_unit, classify_graph, enumerate_affine,
    enumerate_fundamental, fundamental_bound_violations, generically_embeds,
    in_fundamental_set, is_large, is_simple_dimvector, is_small_sink,
    is_small_source, is_tau_sigma_minimal, load_fixture, moduli_dimension,
    pairing, stability_verdict, verify_bounds,
)
from quivermod.io import fixture_names
from quivermod.reductions import TAU
from quivermod.search import replay, vertex_bound
from quivermod.stability import GenericEmbedCache

from conftest import k3, kronecker
from strategies import random_pair, shuffled, zero_pairing_weight


@contextmanager
def criterion(capsys, number, title, limit):
    """Time the block, print one verdict line, and fail on error or overrun."""
    start = time.perf_counter()
    err = None
    try:
        yield
    except Exception as e:   # reported, then re-raised below
        err = e
    elapsed = time.perf_counter() - start
    ok = err is None and elapsed < limit
    with capsys.disabled():
        print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} "
              f"({elapsed:.2f}s, limit {limit}s)")
    if err is not None:
        raise err
    assert elapsed < limit, f"took {elapsed:.2f}s, limit {limit}s"


def test_01_fig1_example(capsys):
    with criterion(capsys, 1, "three-vertex example suite", 1.0):
        pair, theta = load_fixture("fig1")
        q, a = pair.quiver, pair.alpha
        assert theta == {"v1": -2, "v2": 1, "v3": 1}
        # (a)
        assert not in_fundamental_set(pair)
        assert cartan_with_unit(q, a, "v3") == 1
        # (b)
        assert stability_verdict(pair, theta).tag == "Stable"
        # (c)
        assert not any(is_large(pair, v) for v in pair.vertices)
        assert is_small_source(pair, "v1") and is_small_sink(pair, "v2")
        # (d)
        rep = is_tau_sigma_minimal(pair, None, max_depth=6, max_total_dim=60, keep_trace=True)
        assert rep.verdict == "MinimalUpToBound"
        assert rep.bounds_used == (6, 60)
        assert rep.trace and len(rep.trace) == rep.explored
        for p in rep.trace:
            assert p.total >= 6 and len(p.vertices) == 3
        # (e)
        assert moduli_dimension(pair, theta) == 4


def test_02_three_picture_example(capsys):
    with criterion(capsys, 2, "sigma then tau on the seven-vertex example", 1.0):
        first, _ = load_fixture("defn23")
        assert len(first.vertices) == 7
        second = apply_sigma(first, "u").pair
        assert first.alpha["u"] == 2 and second.alpha["u"] == 3
        assert is_large(second, "w")
        third = apply_tau(second, "w").pair
        assert len(third.vertices) == len(second.vertices) - 1 == 6
        rep = is_tau_sigma_minimal(first)
        assert rep.verdict == "NotMinimal"
        assert len(rep.witness) == 2
        assert [str(s) for s in rep.witness] == ["sigma:u", "tau:w"]
        assert canonical_key(replay(first, rep.witness)) == canonical_key(third)


def _quivers_for_oracle():
    a2 = QuiverPair.from_edges(["v1", "v2"], [("v1", "v2")], [1, 1]).quiver
    return {"K2": kronecker().quiver, "A2": a2, "K3": k3().quiver,
            "fig1": load_fixture("fig1")[0].quiver}


def test_03_oracle_cross_validation(capsys):
    with criterion(capsys, 3, "generic embedding matches the rank oracle", 60.0):
        checked = mismatches = 0
        for name, q in _quivers_for_oracle().items():
            cache = GenericEmbedCache()
            n = len(q.vertices)
            for alpha in itertools.product(range(6), repeat=n):
                if sum(alpha) > 5:
                    continue
                a = dict(zip(q.vertices, alpha))
                for beta in itertools.product(*(range(x + 1) for x in alpha)):
                    b = dict(zip(q.vertices, beta))
                    checked += 1
                    if generically_embeds(q, b, a, cache=cache) != brute_force_embeds(q, b, a):
                        mismatches += 1
        assert checked == 840   # every (beta, alpha) with |alpha| <= 5 on the four quivers
        assert mismatches == 0, f"{mismatches} of {checked} disagree"


def test_04_kronecker_ladder(capsys):
    with criterion(capsys, 4, "Kronecker ladder", 1.0):
        theta = {"v1": -1, "v2": 1}
        assert stability_verdict(kronecker(1, 1), theta).tag == "Stable"
        for n in (2, 3, 4):
            v = stability_verdict(kronecker(n, n), theta)
            assert v.tag == "SemistableNotStable"
            assert v.witness == {"v1": 1, "v2": 1}


def test_05_conservation_and_involution(capsys):
    with criterion(capsys, 5, "weight conservation and sigma involution", 10.0):
        rng = random.Random(20240501)
        instances = failures = 0
        while instances < 600:
            p = random_pair(rng, n_max=4, arrows_max=6, entry_max=4)
            th = zero_pairing_weight(p, rng)
            for step in admissible_moves(p):
                try:
                    r = apply_step(p, step, th)
                except WeightIncompatibleError:
                    continue
                instances += 1
                if pairing(r.weight, r.pair.alpha) != 0:
                    failures += 1
                if step.kind != TAU:
                    back = apply_sigma(r.pair, step.vertex, r.weight)
                    if back.pair != p or back.weight != th:
                        failures += 1
        assert failures == 0


def test_06_stability_transport(capsys):
    with criterion(capsys, 6, "stability survives admissible moves", 120.0):
        rng = random.Random(77)
        instances = failures = 0
        while instances < 250:
            p = random_pair(rng, n_max=4, arrows_max=5, entry_max=3)
            th = canonical_weight(p)
            if not any(th.values()) or not stability_verdict(p, th).is_stable:
                continue
            for step in admissible_moves(p):
                instances += 1
                try:
                    r = apply_step(p, step, th)
                except WeightIncompatibleError:
                    failures += 1
                    continue
                if not stability_verdict(r.pair, r.weight).is_stable:
                    failures += 1
        assert failures == 0


def test_07_fundamental_structure(capsys):
    with criterion(capsys, 7, "structure of enumerated fundamental pairs", 60.0):
        checked = 0
        failures = []
        for d in (2, 3):
            for row in enumerate_fundamental(d, 4, 6, 3, search=False):
                p = row.pair
                assert in_fundamental_set(p) and classify_graph(p.quiver).is_wild
                a = analyze_fundamental(p)
                if not all(g.is_dynkin for _, g in a.q_plus_components):
                    failures.append((row.canonical_key, "non-Dynkin component"))
                failures += [(row.canonical_key, msg) for msg in fundamental_bound_violations(p, a)]
                checked += 1
        assert checked > 500
        assert failures == []


def test_08_size_bounds(capsys):
    with criterion(capsys, 8, "size bounds on minimal rows", 60.0):
        assert vertex_bound(2) == 470
        for d in (2, 3):
            rows = enumerate_fundamental(d, 4, 6, 3)
            rep = verify_bounds(rows)
            assert rep.minimal_checked > 0
            assert rep.passed, rep.violations


def test_09_affine(capsys):
    with criterion(capsys, 9, "affine window and simple dimension vectors", 10.0):
        rows = enumerate_affine(2)
        two_loops = QuiverPair.from_edges(["v"], [("v", "v")] * 2, [1])
        assert [canonical_key(r.pair) for r in rows] == [canonical_key(two_loops)]
        for n in range(1, 6):
            assert is_simple_dimvector(QuiverPair.from_edges(["v"], [("v", "v")] * 2, [n]))
        cyc = [("c0", "c1"), ("c1", "c2"), ("c2", "c0")]
        assert is_simple_dimvector(QuiverPair.from_edges(["c0", "c1", "c2"], cyc, [1, 1, 1]))
        assert not is_simple_dimvector(QuiverPair.from_edges(["c0", "c1", "c2"], cyc, [2, 2, 2]))
        rng = random.Random(3)
        for _ in range(200):
            p = random_pair(rng, n_max=4, arrows_max=5, entry_max=3, loops=False)
            if len(p.vertices) >= 2 and not _has_cycle(p):
                assert not is_simple_dimvector(p)


def _has_cycle(pair):
    seen, stack = set(), set()

    def visit(v):
        seen.add(v)
        stack.add(v)
        for a in pair.quiver.out_arrows(v):
            w = a.target
            if w in stack or (w not in seen and visit(w)):
                return True
        stack.discard(v)
        return False

    return any(visit(v) for v in pair.vertices if v not in seen)


def test_10_canonical_keys(capsys):
    with criterion(capsys, 10, "canonical keys under relabeling", 10.0):
        rng = random.Random(10)
        keys = {}
        for name in fixture_names():
            pair, _ = load_fixture(name)
            key = canonical_key(pair)
            for _ in range(100):
                assert canonical_key(shuffled(pair, rng)) == key
            keys[name] = key
        assert len(set(keys.values())) == len(keys)
