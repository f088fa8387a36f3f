import itertools
import random
import threading

import pytest
from hypothesis import given, settings, strategies as st

from quivermod import (
    ComplexityError, DomainError, GenericEmbedCache, PreconditionError, Quiver,
    QuiverPair, WeightIncompatibleError, admissible_moves, apply_step,
    brute_force_embeds, canonical_weight, generically_embeds, moduli_dimension,
    stability_verdict,
)
from quivermod.stability import embeddable_subvectors

from conftest import k3, kronecker
from strategies import pairs, random_pair


def v2(a, b):
    return {"v1": a, "v2": b}


class TestGenericEmbedding:
    def test_base_cases(self, fig1):
        q, a = fig1[0].quiver, fig1[0].alpha
        assert generically_embeds(q, {v: 0 for v in q.vertices}, a)
        assert generically_embeds(q, a, a)

    def test_kronecker(self):
        q = kronecker().quiver
        assert generically_embeds(q, v2(0, 1), v2(1, 1))
        assert not generically_embeds(q, v2(1, 0), v2(1, 1))
        assert generically_embeds(q, v2(1, 1), v2(2, 2))

    def test_beta_must_be_below_alpha(self):
        with pytest.raises(DomainError):
            generically_embeds(kronecker().quiver, v2(2, 0), v2(1, 1))

    def test_brute_force_small_cases(self):
        q = kronecker().quiver
        assert brute_force_embeds(q, v2(0, 0), v2(1, 1))
        assert brute_force_embeds(q, v2(1, 1), v2(1, 1))
        assert not brute_force_embeds(q, v2(1, 0), v2(1, 1))
        with pytest.raises(ComplexityError):
            brute_force_embeds(q, v2(0, 0), v2(5, 5))

    def test_agrees_with_brute_force_on_random_quivers(self):
        rng = random.Random(5)
        for _ in range(25):
            p = random_pair(rng, n_max=3, arrows_max=4, entry_max=2)
            q = p.quiver
            for beta in itertools.product(*(range(p.alpha[v] + 1) for v in q.vertices)):
                b = dict(zip(q.vertices, beta))
                assert generically_embeds(q, b, p.alpha) == brute_force_embeds(q, b, p.alpha), (p, b)

    def test_fresh_cache_matches_shared(self):
        rng = random.Random(9)
        for _ in range(20):
            p = random_pair(rng, n_max=3, arrows_max=4, entry_max=3)
            assert (embeddable_subvectors(p.quiver, p.alpha, cache=GenericEmbedCache())
                    == embeddable_subvectors(p.quiver, p.alpha))

    def test_concurrent_queries_agree(self, fig1):
        q = fig1[0].quiver
        alpha = {"v1": 3, "v2": 2, "v3": 4}
        cache = GenericEmbedCache()
        expected = embeddable_subvectors(q, alpha, cache=GenericEmbedCache())
        results = []

        def work():
            results.append(embeddable_subvectors(q, alpha, cache=cache))

        threads = [threading.Thread(target=work) for _ in range(8)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert all(r == expected for r in results)


class TestVerdicts:
    def test_fig1_stable(self, fig1):
        p, th = fig1
        assert stability_verdict(p, th).tag == "Stable"
        assert moduli_dimension(p, th) == 4

    def test_kronecker_ladder(self):
        th = v2(-1, 1)
        assert stability_verdict(kronecker(1, 1), th).tag == "Stable"
        for n in (2, 3, 4):
            v = stability_verdict(kronecker(n, n), th)
            assert v.tag == "SemistableNotStable"
            assert v.witness == v2(1, 1)

    def test_nonzero_pairing(self):
        v = stability_verdict(kronecker(1, 2), v2(-1, 1))
        assert v.tag == "NotSemistable" and v.witness is None

    def test_not_semistable_witness(self):
        v = stability_verdict(kronecker(1, 1), v2(1, -1))
        assert v.tag == "NotSemistable" and v.witness == v2(0, 1)

    def test_moduli_dimensions(self):
        assert moduli_dimension(k3(), v2(-1, 1)) == 2
        assert moduli_dimension(kronecker(), v2(-1, 1)) == 1
        with pytest.raises(PreconditionError):
            moduli_dimension(kronecker(2, 2), v2(-1, 1))

    def test_zero_alpha(self):
        with pytest.raises(DomainError):
            stability_verdict(kronecker(0, 0), v2(0, 0))

    def test_guard(self):
        q = Quiver.from_edges(["a", "b"], [("a", "b")])
        p = QuiverPair(q, {"a": 4000, "b": 4000})
        with pytest.raises(ComplexityError):
            stability_verdict(p, {"a": -1, "b": 1})

    def test_canonical_weight_kronecker(self):
        assert canonical_weight(kronecker()) == v2(-2, 2)

    @settings(max_examples=150, deadline=None)
    @given(pairs(n_max=4, arrows_max=5, entry_max=3), st.integers(2, 5))
    def test_verdict_lattice_and_scaling(self, p, k):
        th = canonical_weight(p)
        v = stability_verdict(p, th)
        subs = embeddable_subvectors(p.quiver, p.alpha)
        proper = [b for b in subs if any(b) and b != p.vector]
        vals = [sum(th[x] * y for x, y in zip(p.vertices, b)) for b in proper]
        if v.tag == "Stable":
            assert all(x > 0 for x in vals)
        elif v.tag == "SemistableNotStable":
            assert min(vals) == 0
            w = v.witness
            assert any(w.values()) and w != p.alpha
            assert tuple(w[x] for x in p.vertices) in subs
        scaled = stability_verdict(p, {x: k * y for x, y in th.items()})
        assert scaled == v


@settings(max_examples=200, deadline=None)
@given(pairs(n_max=4, arrows_max=5, entry_max=3))
def test_stability_survives_reductions(p):
    th = canonical_weight(p)
    if not stability_verdict(p, th).is_stable:
        return
    for step in admissible_moves(p):
        try:
            r = apply_step(p, step, th)
        except WeightIncompatibleError:   # impossible for a semistable alpha
            pytest.fail(f"{step} rejected a weight for which alpha is stable")
        assert stability_verdict(r.pair, r.weight).is_stable
