"""Acceptance criteria, each checked at its stated tolerance and time budget.

A PASS/FAIL line per criterion is printed in the terminal summary.
"""

import math
import time

import numpy as np
import pytest

from intrinsic_risk import (
    EligibleAsset,
    ESSet,
    Position,
    ScenarioSpace,
    VaRSet,
    build_report,
    intrinsic_conic_closed_form,
    intrinsic_dual,
    intrinsic_of_intermediate,
    intrinsic_risk,
    is_interior,
    mix,
    monetary_risk,
    sample_dual_measures,
)
from intrinsic_risk.properties import SUITE, instance, random_asset, run_suite

SEED = 20240601


def criterion(number, title):
    return pytest.mark.criterion(number, title)


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self.start


@criterion(1, "translation chain 3/4 -> 1/2, 2/3")
def test_translation_chain():
    with Timer() as t:
        assert intrinsic_of_intermediate(0.75, 0.5) == 0.5
        assert intrinsic_of_intermediate(0.75, 0.25) == pytest.approx(2 / 3, abs=1e-15)

        space = ScenarioSpace.uniform(4)
        aset = VaRSet(space, 0.25)
        s = EligibleAsset(1.0, space.constant(1.0))
        x = Position(1.0, [-3, -3, 1, 5])
        r = intrinsic_risk(aset, s, x).value
        assert abs(r - 0.75) <= 1e-8
        for alpha, expected in ((0.5, 0.5), (0.25, 2 / 3)):
            measured = intrinsic_risk(aset, s, mix(x, s, alpha)).value
            assert abs(measured - expected) <= 1e-8
            assert abs(intrinsic_of_intermediate(r, alpha) - expected) <= 1e-8
    assert t.seconds < 1.0


@criterion(2, "VaR counterexample gives 1/3")
def test_var_counterexample():
    with Timer() as t:
        space = ScenarioSpace.uniform(4)
        aset = VaRSet(space, 0.25)
        s = EligibleAsset(1.0, space.constant(1.0))
        x = Position(1.0, -space.indicator([0]))
        y = Position(1.0, -space.indicator([1]))
        assert intrinsic_risk(aset, s, x).value == 0.0
        assert intrinsic_risk(aset, s, y).value == 0.0
        half = Position(0.5 * (x.initial_value + y.initial_value), 0.5 * (x.payoff + y.payoff))
        assert abs(intrinsic_risk(aset, s, half).value - 1 / 3) <= 1e-8
    assert t.seconds < 1.0


def _closed_form_gaps(kind, rng, n=1000):
    gaps = []
    for _ in range(n):
        aset, s, x = instance(rng, kind, unacceptable=rng.random() < 0.8)
        assert 4 <= aset.space.size <= 12 and is_interior(aset, s.payoff)
        bis = intrinsic_risk(aset, s, x).value
        cf = intrinsic_conic_closed_form(x, monetary_risk(aset, s, x.payoff)).value
        gaps.append(abs(bis - cf))
    return np.array(gaps)


@criterion(3, "conic closed form equals bisection")
def test_closed_form_equivalence():
    rng = np.random.default_rng(SEED + 3)
    with Timer() as t:
        for kind in ("var", "es"):
            gaps = _closed_form_gaps(kind, rng)
            assert gaps.size == 1000
            assert gaps.max() <= 1e-8, f"{kind}: worst gap {gaps.max():.3g}"
    assert t.seconds < 30.0


@criterion(4, "dual supremum agrees with bisection")
def test_dual_primal():
    rng = np.random.default_rng(SEED + 4)
    with Timer() as t:
        for _ in range(200):
            aset, s, x = instance(rng, "es", unacceptable=rng.random() < 0.85)
            primal = intrinsic_risk(aset, s, x).value
            dual = intrinsic_dual(aset, s, x, sample_dual_measures(aset))
            assert abs(dual - primal) <= 1e-6
        gaps = []
        for _ in range(100):
            aset, s, x = instance(rng, "generator", unacceptable=rng.random() < 0.85)
            primal = intrinsic_risk(aset, s, x).value
            q = sample_dual_measures(aset, n_random=10_000, seed=int(rng.integers(1 << 31)),
                                     include_vertices=False)
            assert q.shape[0] == 10_000
            dual = intrinsic_dual(aset, s, x, q)
            assert dual <= primal + 1e-9
            gaps.append(primal - dual)
        assert max(gaps) <= 5e-3
    assert t.seconds < 60.0


@criterion(5, "intrinsic capital never exceeds monetary capital")
def test_efficiency():
    rng = np.random.default_rng(SEED + 5)
    with Timer() as t:
        for kind in ("var", "es", "generator", "generator0"):
            for _ in range(250):
                aset, s, x = instance(rng, kind, unacceptable=True)
                rep = build_report(aset, s, x, random_asset(rng, aset))
                assert x.initial_value * rep.intrinsic.value <= rep.monetary.value + 1e-9
                if not aset.flags.conic:
                    continue
                assert np.max(np.abs(rep.return_intrinsic - rep.return_traditional)) <= 1e-10
                si, st = rep.sharpe_intrinsic, rep.sharpe_traditional
                assert si.degenerate == st.degenerate
                if not si.degenerate:
                    assert abs(si.value - st.value) <= 1e-8
    assert t.seconds < 60.0


PROPERTY_NAMES = sorted(SUITE)


@pytest.fixture(scope="module")
def suite_results():
    with Timer() as t:
        results = run_suite(seed=SEED, instances=1000)
    return {r.name: r for r in results}, t.seconds


@criterion(6, "property suites at 1000 instances")
@pytest.mark.parametrize("name", PROPERTY_NAMES)
def test_property(suite_results, name):
    results, _ = suite_results
    r = results[name]
    assert r.instances >= 1000
    assert r.violations == 0, r.notes[:3]


@criterion(6, "property suites at 1000 instances")
def test_property_runtime(suite_results):
    results, seconds = suite_results
    assert set(results) == set(PROPERTY_NAMES)
    assert seconds < 120.0


@criterion(7, "boundary asset links infinite monetary and unit intrinsic risk")
def test_infinity_linkage():
    space = ScenarioSpace.uniform(4)
    aset = VaRSet(space, 0.25)
    # zeros on half the mass: acceptable, but no uniform shift down stays acceptable
    s = EligibleAsset(1.0, [0.0, 0.0, 1.0, 1.0])
    assert aset.contains(s.payoff) and not is_interior(aset, s.payoff)
    for c in (0.5, 1.0, 7.0):
        x = Position(c, space.constant(-c))
        rho = monetary_risk(aset, s, x.payoff)
        assert rho.finite is False and rho.value == math.inf
        assert intrinsic_risk(aset, s, x).value == 1.0
