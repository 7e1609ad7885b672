import itertools
import math

import numpy as np
import pytest
from scipy.optimize import linprog

from intrinsic_risk import (
    EligibleAsset,
    ESSet,
    GeneratorSet,
    Position,
    PreconditionError,
    ScenarioSpace,
    StructuralError,
    coherent_dual_set,
    intrinsic_dual,
    intrinsic_risk,
    membership_via_separation,
    mix,
    monetary_risk,
    penalty,
    sample_dual_measures,
)
from intrinsic_risk.duality import coherent_risk_dual, penalties
from intrinsic_risk.properties import instance, random_set, random_space


def lp_penalty(g, c, q):
    """inf{q.y : G y >= c} straight from the primal LP."""
    res = linprog(q, A_ub=-g, b_ub=-c, bounds=[(None, None)] * len(q), method="highs")
    if res.status == 3:
        return -math.inf
    assert res.status == 0, res.message
    return res.fun


def es_vertices_oracle(p, alpha):
    """All q on the capped simplex with every coordinate at a bound but one."""
    n = len(p)
    cap = [pi / alpha for pi in p]
    found = set()
    for free in range(n):
        for pattern in itertools.product((0, 1), repeat=n - 1):
            q = [0.0] * n
            others = [i for i in range(n) if i != free]
            for i, on in zip(others, pattern):
                q[i] = cap[i] * on
            rest = 1.0 - sum(q)
            if -1e-12 <= rest <= cap[free] + 1e-12:
                q[free] = max(rest, 0.0)
                found.add(tuple(round(v, 12) for v in q))
    return found


class TestPenalty:
    def test_es_uniform(self, es50):
        assert penalty(es50, np.full(4, 0.25)).value == 0.0

    def test_es_point_mass(self, es50):
        assert penalty(es50, [1, 0, 0, 0]).value == -math.inf

    def test_alpha_min_sign(self, space4):
        aset = GeneratorSet(space4, [[0.25] * 4], [-2.0])
        pv = penalty(aset, [0.25] * 4)
        assert pv.value == pytest.approx(-2.0) and pv.alpha_min == pytest.approx(2.0)

    def test_var_rejected(self, var25):
        with pytest.raises(PreconditionError):
            penalty(var25, [0.25] * 4)

    def test_generator_matches_lp(self, rng):
        for _ in range(150):
            aset = random_set(rng, random_space(rng), "generator")
            g, c = aset.generators, aset.bounds
            w = rng.dirichlet(np.full(g.shape[0], 0.3), size=20)
            qs = np.vstack([w @ g, rng.dirichlet(np.ones(aset.space.size), size=5)])
            qs /= qs.sum(axis=1, keepdims=True)
            ours = penalties(aset, qs)
            for q, v in zip(qs, ours):
                ref = lp_penalty(g, c, q)
                if math.isinf(ref):
                    assert v == -math.inf
                else:
                    # a near-miss basis may be dropped, never invented
                    assert v <= ref + 1e-9
                    if np.isfinite(v):
                        assert v == pytest.approx(ref, abs=1e-7)

    @pytest.mark.parametrize("kind", ("es", "generator0"))
    def test_homogeneous_on_cones(self, kind, rng):
        for _ in range(100):
            aset = random_set(rng, random_space(rng), kind)
            q = sample_dual_measures(aset, n_random=50, seed=int(rng.integers(1 << 30)))
            q = np.vstack([q, rng.dirichlet(np.ones(aset.space.size), size=20)])
            values = penalties(aset, q)
            assert np.all((values == 0.0) | (values == -math.inf))


class TestDualSet:
    def test_es_six_vertices(self, es50):
        verts = coherent_dual_set(es50)
        assert len(verts) == 6
        assert {tuple(round(v, 12) for v in row) for row in verts} == es_vertices_oracle([0.25] * 4, 0.5)
        assert all(sorted(row) == [0, 0, 0.5, 0.5] for row in verts.tolist())

    def test_matches_oracle_random(self, rng):
        for _ in range(50):
            space = random_space(rng)
            alpha = float(rng.uniform(0.1, 1.0))
            verts = coherent_dual_set(ESSet(space, alpha))
            expected = np.array(sorted(es_vertices_oracle(space.probabilities.tolist(), alpha)))
            got = np.array(sorted(map(tuple, verts)))
            # float noise can split or merge rows only below 1e-12
            assert got.shape == expected.shape
            np.testing.assert_allclose(got, expected, atol=1e-11)

    def test_point_masses(self):
        space = ScenarioSpace([0.5, 0.3, 0.2])
        verts = coherent_dual_set(ESSet(space, 0.4))
        singles = {int(np.argmax(v)) for v in verts if np.isclose(v.max(), 1.0)}
        assert singles == {0}

    def test_sup_is_es(self, es50):
        assert coherent_risk_dual(es50, [-10, -2, 1, 5]) == pytest.approx(6.0, abs=1e-12)

    def test_size_cap(self):
        with pytest.raises(StructuralError):
            coherent_dual_set(ESSet(ScenarioSpace.uniform(13), 0.5))

    def test_large_space_sampling(self):
        aset = ESSet(ScenarioSpace.uniform(20), 0.25)
        q = sample_dual_measures(aset, n_random=200, seed=1)
        assert q.shape == (200, 20)
        np.testing.assert_allclose(q.sum(axis=1), 1.0, atol=1e-12)
        assert np.all(q <= 0.05 / 0.25 + 1e-12)

    def test_non_conic_rejected(self, space4):
        with pytest.raises(PreconditionError):
            coherent_dual_set(GeneratorSet(space4, [[0.25] * 4], [-1.0]))


class TestSeparation:
    def test_demo_separated(self, es50):
        q = np.array([[0.5, 0.5, 0, 0]])
        assert penalty(es50, q[0]).value == 0.0
        assert not membership_via_separation(es50, [-10, -2, 1, 5], q)

    def test_acceptable_never_separated(self, es50, rng):
        verts = coherent_dual_set(es50)
        for _ in range(200):
            y = rng.normal(size=4) + 3
            if es50.contains(y):
                assert membership_via_separation(es50, y, verts)

    def test_boundary_not_separated(self, es50, demo):
        x, s = demo
        y = mix(x, s, intrinsic_risk(es50, s, x).value).payoff
        assert membership_via_separation(es50, y, coherent_dual_set(es50))

    @pytest.mark.parametrize("kind", ("es", "generator"))
    def test_complete_on_vertices(self, kind, rng):
        # with the full extreme-point list, separation decides membership
        for _ in range(200):
            aset, s, x = instance(rng, kind)
            if kind == "es":
                q = coherent_dual_set(aset)
            else:
                q = aset.generators
            assert membership_via_separation(aset, x.payoff, q) == aset.contains(x.payoff)


class TestIntrinsicDual:
    def test_acceptable_zero(self, es50, demo):
        _, s = demo
        assert intrinsic_dual(es50, s, Position(1.0, np.ones(4)), coherent_dual_set(es50)) == 0.0

    def test_es_demo(self, es50, demo):
        x, s = demo
        assert intrinsic_dual(es50, s, x, coherent_dual_set(es50)) == pytest.approx(0.375, abs=1e-12)

    def test_generator_demo(self, space4):
        aset = GeneratorSet(space4, [[0.25] * 4, [0.5, 0.5, 0, 0], [0, 0.5, 0, 0.5]], [-1.0, -4.0, -3.0])
        s = EligibleAsset(1.0, np.ones(4))
        x = Position(10.0, [-10, -2, 1, 5])
        primal = intrinsic_risk(aset, s, x).value
        dual = intrinsic_dual(aset, s, x, sample_dual_measures(aset, seed=3))
        assert abs(primal - dual) <= 1e-6

    def test_coherent_recovery(self, rng):
        for _ in range(200):
            aset, _, x = instance(rng, "es", unacceptable=rng.random() < 0.8)
            s = EligibleAsset(1.0, aset.space.constant(1.0))
            rho = coherent_risk_dual(aset, x.payoff)
            expected = max(rho, 0.0) / (x.initial_value + max(rho, 0.0))
            assert intrinsic_dual(aset, s, x, coherent_dual_set(aset)) == pytest.approx(expected, abs=1e-8)
            assert rho == pytest.approx(monetary_risk(aset, s, x.payoff).value, abs=1e-8 * max(1, np.abs(x.payoff).max()))

    def test_var_rejected(self, var25, demo):
        x, s = demo
        with pytest.raises(PreconditionError):
            intrinsic_dual(var25, s, x, [[0.25] * 4])
