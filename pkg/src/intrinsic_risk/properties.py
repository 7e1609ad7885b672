"""Seeded random instances and the structural invariant suite.

Each ``check_*`` function draws ``n`` instances from a NumPy generator,
verifies one structural property at a fixed tolerance and returns a
:class:`PropertyResult`.  :func:`run_suite` runs them all; the ``props``
CLI subcommand and the acceptance tests are thin wrappers around it.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Sequence

import numpy as np

from .acceptance import AcceptanceSet, ESSet, GeneratorSet, VaRSet, is_interior
from .duality import intrinsic_dual, membership_via_separation, sample_dual_measures
from .intrinsic import intrinsic_conic_closed_form, intrinsic_of_intermediate, intrinsic_risk
from .monetary import monetary_risk
from .report import build_report
from .scenario import EligibleAsset, Position, ScenarioSpace, mix

#: Slack for comparisons between two bisection outputs of width 1e-10.
BISECT_SLACK = 1e-9

CONIC_KINDS = ("var", "es", "generator0")
CONVEX_KINDS = ("es", "generator")
ZERO_KINDS = ("var", "es", "generator")
ALL_KINDS = ("var", "es", "generator", "generator0")


@dataclass
class PropertyResult:
    name: str
    instances: int = 0
    violations: int = 0
    max_error: float = 0.0
    seconds: float = 0.0
    notes: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.instances > 0 and self.violations == 0

    def record(self, ok: bool, error: float = 0.0, note: str = "") -> None:
        self.instances += 1
        if math.isfinite(error):
            self.max_error = max(self.max_error, error)
        if not ok:
            self.violations += 1
            if note and len(self.notes) < 5:
                self.notes.append(note)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"{status}  {self.name:<28} instances={self.instances:<5d} "
                f"violations={self.violations:<4d} max_err={self.max_error:.2e} "
                f"time={self.seconds:.2f}s")


# ---------------------------------------------------------------- instances

def random_space(rng: np.random.Generator, n: int = None) -> ScenarioSpace:
    n = int(rng.integers(4, 13)) if n is None else n
    if rng.random() < 0.4:
        return ScenarioSpace.uniform(n)
    p = rng.dirichlet(np.ones(n))
    return ScenarioSpace(p / p.sum())


def random_set(rng: np.random.Generator, space: ScenarioSpace, kind: str) -> AcceptanceSet:
    """``kind`` is one of ``var``, ``es``, ``generator`` (bounds < 0) or ``generator0`` (conic)."""
    if kind == "var":
        return VaRSet(space, float(rng.uniform(0.05, 0.45)))
    if kind == "es":
        return ESSet(space, float(rng.uniform(0.05, 0.6)))
    k = int(rng.integers(1, 4))
    gens = rng.dirichlet(np.ones(space.size), size=k) * 0.999 + 0.001 * space.probabilities
    gens = gens / gens.sum(axis=1, keepdims=True)
    gens[:, space.probabilities == 0.0] = 0.0
    gens = gens / gens.sum(axis=1, keepdims=True)
    bounds = np.zeros(k) if kind == "generator0" else -rng.uniform(0.1, 3.0, size=k)
    return GeneratorSet(space, gens, bounds)


def random_asset(rng: np.random.Generator, aset: AcceptanceSet, price: float = None,
                 sparse: float = 0.3) -> EligibleAsset:
    """An eligible asset whose payoff lies in the interior of ``aset``."""
    n = aset.space.size
    s0 = float(rng.uniform(0.5, 2.0)) if price is None else price
    for _ in range(20):
        st = s0 * rng.uniform(0.5, 1.5, size=n)
        if rng.random() < sparse:
            st[rng.random(n) < 0.2] = 0.0
        if aset.contains(st) and is_interior(aset, st):
            return EligibleAsset(s0, st)
    return EligibleAsset(s0, s0 * rng.uniform(0.5, 1.5, size=n))


def random_position(rng: np.random.Generator, space: ScenarioSpace) -> Position:
    x0 = float(rng.uniform(0.5, 10.0))
    xt = rng.normal(rng.uniform(-4.0, 3.0), rng.uniform(1.0, 8.0), size=space.size)
    return Position(x0, xt)


def unacceptable_position(rng, aset, tries: int = 50) -> Position:
    for _ in range(tries):
        x = random_position(rng, aset.space)
        if not aset.contains(x.payoff):
            return x
    return Position(1.0, aset.space.constant(-1.0))


def instance(rng, kind: str, unacceptable: bool = False):
    space = random_space(rng)
    aset = random_set(rng, space, kind)
    s = random_asset(rng, aset)
    x = unacceptable_position(rng, aset) if unacceptable else random_position(rng, space)
    return aset, s, x


def boundary_asset(rng, aset: AcceptanceSet) -> EligibleAsset:
    """Acceptable asset payoff on the boundary of a VaR or ES set.

    Zero on a set of scenarios whose mass exceeds ``alpha`` (VaR) or reaches
    ``alpha`` (ES), positive elsewhere.
    """
    p = aset.space.probabilities
    order = rng.permutation(p.size)
    zero, mass = [], 0.0
    for i in order:
        zero.append(i)
        mass += p[i]
        if mass > aset.alpha + 1e-9:
            break
    st = rng.uniform(0.5, 1.5, size=p.size)
    st[zero] = 0.0
    return EligibleAsset(1.0, st)


def _scale(x, s):
    return max(1.0, float(np.max(np.abs(x))), s.initial_price)


# ---------------------------------------------------------------- checks

def _run(name: str, n: int, kinds: Sequence[str], rng, body: Callable) -> PropertyResult:
    res = PropertyResult(name)
    t0 = time.perf_counter()
    for i in range(n):
        body(res, rng, kinds[i % len(kinds)])
    res.seconds = time.perf_counter() - t0
    return res


def check_relevance(rng, n=1000):
    def body(res, rng, kind):
        aset, s, x = instance(rng, kind, unacceptable=rng.random() < 0.7)
        r = intrinsic_risk(aset, s, x).value
        res.record((r > 0) == (not aset.contains(x.payoff)), note=f"{kind}: R={r}")
    return _run("relevance", n, ALL_KINDS, rng, body)


def check_boundary(rng, n=1000, delta=1e-8):
    def body(res, rng, kind):
        aset, s, x = instance(rng, kind, unacceptable=True)
        r = intrinsic_risk(aset, s, x).value
        if not 0.0 < r < 1.0:
            res.record(True)
            return
        above = mix(x, s, min(r + delta, 1.0)).payoff
        below = mix(x, s, max(r - delta, 0.0)).payoff
        res.record(aset.contains(above) and not aset.contains(below), note=f"{kind}: R={r}")
    return _run("boundary", n, ALL_KINDS, rng, body)


def check_up_set(rng, n=1000, probes=20):
    def body(res, rng, kind):
        aset, s, x = instance(rng, kind, unacceptable=True)
        r = intrinsic_risk(aset, s, x).value
        lams = np.concatenate([[r, 1.0], rng.uniform(r, 1.0, probes - 2)])
        ok = all(aset.contains(mix(x, s, lam).payoff) for lam in lams)
        res.record(ok, note=f"{kind}: R={r}")
    return _run("up_set", n, ALL_KINDS, rng, body)


def check_interior_link(rng, n=1000):
    """R < 1 for interior assets; R = 1 and rho = +inf for boundary assets."""
    def body(res, rng, kind):
        aset, s, x = instance(rng, kind, unacceptable=True)
        r_int = intrinsic_risk(aset, s, x).value
        ok = r_int < 1.0
        if kind in ("var", "es"):
            sb = boundary_asset(rng, aset)
            c = float(rng.uniform(0.1, 10.0))
            const = Position(c, aset.space.constant(-c))
            ok = ok and not is_interior(aset, sb.payoff)
            ok = ok and intrinsic_risk(aset, sb, const).value == 1.0
            ok = ok and not monetary_risk(aset, sb, const.payoff).finite
        res.record(ok, note=f"{kind}: R(interior asset)={r_int}")
    return _run("interior_link", n, CONIC_KINDS, rng, body)


def check_monotone_elementwise(rng, n=1000):
    def body(res, rng, kind):
        aset, s, y = instance(rng, kind)
        x = Position(y.initial_value + rng.uniform(0, 3), y.payoff + rng.exponential(1.0, y.payoff.size)
                     * (rng.random(y.payoff.size) < 0.5))
        rx, ry = intrinsic_risk(aset, s, x).value, intrinsic_risk(aset, s, y).value
        res.record(rx <= ry + BISECT_SLACK, max(0.0, rx - ry), note=f"{kind}: {rx} > {ry}")
    return _run("monotone_elementwise", n, ZERO_KINDS, rng, body)


def check_monotone_returnwise(rng, n=1000):
    def body(res, rng, kind):
        aset, s, y = instance(rng, kind)
        x0 = float(rng.uniform(0.1, 20.0))
        bump = rng.exponential(0.5, y.payoff.size) * (rng.random(y.payoff.size) < 0.5)
        x = Position(x0, x0 * (y.returns + bump))
        rx, ry = intrinsic_risk(aset, s, x).value, intrinsic_risk(aset, s, y).value
        res.record(rx <= ry + BISECT_SLACK, max(0.0, rx - ry), note=f"{kind}: {rx} > {ry}")
    return _run("monotone_returnwise", n, CONIC_KINDS, rng, body)


def check_translation(rng, n=1000, tol=1e-8):
    def body(res, rng, kind):
        aset, s, x = instance(rng, kind, unacceptable=True)
        r = intrinsic_risk(aset, s, x).value
        err = 0.0
        for frac in (0.1, 0.5, 0.9):
            a = frac * r
            shifted = intrinsic_risk(aset, s, mix(x, s, a)).value
            err = max(err, abs(shifted - intrinsic_of_intermediate(r, a)))
        res.record(err <= tol, err, note=f"{kind}: err={err:.3g}")
    return _run("translation", n, ALL_KINDS, rng, body)


def check_quasi_convex_positions(rng, n=1000, tol=1e-8):
    def body(res, rng, kind):
        aset, s, x = instance(rng, kind)
        y = random_position(rng, aset.space)
        a = float(rng.uniform())
        z = Position(a * x.initial_value + (1 - a) * y.initial_value, a * x.payoff + (1 - a) * y.payoff)
        rx, ry, rz = (intrinsic_risk(aset, s, p).value for p in (x, y, z))
        excess = rz - max(rx, ry)
        res.record(excess <= tol, max(0.0, excess), note=f"{kind}: excess={excess:.3g}")
    return _run("quasi_convex_positions", n, CONVEX_KINDS, rng, body)


def check_quasi_convex_assets(rng, n=1000, tol=1e-8):
    def body(res, rng, kind):
        aset, s1, x = instance(rng, kind, unacceptable=rng.random() < 0.8)
        s2 = random_asset(rng, aset, price=s1.initial_price)
        a = float(rng.uniform())
        sm = EligibleAsset(s1.initial_price, a * s1.payoff + (1 - a) * s2.payoff)
        r1, r2, rm = (intrinsic_risk(aset, t, x).value for t in (s1, s2, sm))
        excess = rm - max(r1, r2)
        res.record(excess <= tol, max(0.0, excess), note=f"{kind}: excess={excess:.3g}")
    return _run("quasi_convex_assets", n, CONVEX_KINDS, rng, body)


def check_scale_invariance(rng, n=1000, tol=1e-8):
    def body(res, rng, kind):
        aset, s, x = instance(rng, kind, unacceptable=rng.random() < 0.8)
        r = intrinsic_risk(aset, s, x).value
        err = max(abs(intrinsic_risk(aset, s, x.scaled(a)).value - r) for a in (0.1, 3.0, 100.0))
        res.record(err <= tol, err, note=f"{kind}: err={err:.3g}")
    return _run("scale_invariance", n, CONIC_KINDS, rng, body)


def check_s_additivity(rng, n=1000, tol=1e-8):
    def body(res, rng, kind):
        aset, s, x = instance(rng, kind)
        m = float(rng.uniform(-5.0, 5.0))
        shifted = x.payoff + m * s.payoff
        r0 = monetary_risk(aset, s, x.payoff)
        r1 = monetary_risk(aset, s, shifted)
        if not (r0.finite and r1.finite):
            res.record(r0.value == r1.value)
            return
        err = abs(r1.value - (r0.value - m * s.initial_price))
        bound = tol * max(_scale(x.payoff, s), _scale(shifted, s))
        res.record(err <= bound, err, note=f"{kind}: err={err:.3g}")
    return _run("s_additivity", n, ALL_KINDS, rng, body)


def check_positive_homogeneity(rng, n=1000, tol=1e-8):
    def body(res, rng, kind):
        aset, s, x = instance(rng, kind)
        r = monetary_risk(aset, s, x.payoff).value
        ok, err = True, 0.0
        for lam in (0.5, 2.0, 10.0):
            rl = monetary_risk(aset, s, lam * x.payoff).value
            e = abs(rl - lam * r)
            err = max(err, e)
            ok = ok and e <= tol * _scale(lam * x.payoff, s)
        res.record(ok, err, note=f"{kind}: err={err:.3g}")
    return _run("positive_homogeneity", n, CONIC_KINDS, rng, body)


def check_closed_form(rng, kind: str, n=1000, tol=1e-8):
    """Bisection against the conic closed form built from the monetary risk."""
    def body(res, rng, kind):
        aset, s, x = instance(rng, kind, unacceptable=rng.random() < 0.8)
        bis = intrinsic_risk(aset, s, x).value
        cf = intrinsic_conic_closed_form(x, monetary_risk(aset, s, x.payoff)).value
        err = abs(bis - cf)
        res.record(err <= tol, err, note=f"{kind}: bisection={bis} closed={cf}")
    return _run(f"closed_form_{kind}", n, (kind,), rng, body)


def check_scaled_altered(rng, n=1000, tol=1e-8):
    """Intrinsic altered payoff equals (1 - R) times the traditional one."""
    def body(res, rng, kind):
        aset, s, x = instance(rng, kind, unacceptable=True)
        rep = build_report(aset, s, x, s)
        if rep.altered_traditional is None:
            res.record(False, note=f"{kind}: infinite monetary risk with interior asset")
            return
        lhs = rep.altered_intrinsic.payoff
        rhs = (1.0 - rep.intrinsic.value) * rep.altered_traditional.payoff
        err = float(np.max(np.abs(lhs - rhs)))
        res.record(err <= tol * _scale(x.payoff, s), err, note=f"{kind}: err={err:.3g}")
    return _run("scaled_altered", n, CONIC_KINDS, rng, body)


def check_efficiency(rng, n=1000, cap_tol=1e-9, ret_tol=1e-10, sharpe_tol=1e-8):
    """Capital comparison on all kinds; return and Sharpe equality on cones."""
    def body(res, rng, kind):
        aset, s, x = instance(rng, kind, unacceptable=True)
        bench = random_asset(rng, aset)
        rep = build_report(aset, s, x, bench)
        ok = rep.capital_intrinsic <= rep.capital_traditional + cap_tol
        err = 0.0
        if aset.flags.conic:
            err = float(np.max(np.abs(rep.return_intrinsic - rep.return_traditional)))
            ok = ok and err <= ret_tol
            si, st = rep.sharpe_intrinsic, rep.sharpe_traditional
            if si.degenerate or st.degenerate:
                ok = ok and si.degenerate == st.degenerate
            else:
                ok = ok and abs(si.value - st.value) <= sharpe_tol
        res.record(ok, err, note=f"{kind}: capital {rep.capital_intrinsic} vs {rep.capital_traditional}, ret err {err:.3g}")
    return _run("efficiency", n, ALL_KINDS, rng, body)


def check_dual_primal(rng, kind: str, n: int, tol: float, samples: int = 10_000,
                      concentration: float = 0.1):
    """Primal bisection against the dual supremum.

    ES uses the exact vertex list; generator sets use random mixtures of the
    generators only, so the dual value must sit below the primal.
    """
    res = PropertyResult(f"dual_primal_{kind}")
    t0 = time.perf_counter()
    for _ in range(n):
        aset, s, x = instance(rng, kind, unacceptable=rng.random() < 0.85)
        primal = intrinsic_risk(aset, s, x).value
        if kind == "es":
            q = sample_dual_measures(aset)
        else:
            q = sample_dual_measures(aset, n_random=samples, seed=int(rng.integers(2**31)),
                                     concentration=concentration, include_vertices=False)
        dual = intrinsic_dual(aset, s, x, q)
        gap = abs(primal - dual)
        ok = gap <= tol and dual <= primal + BISECT_SLACK
        res.record(ok, gap, note=f"primal={primal} dual={dual}")
    res.seconds = time.perf_counter() - t0
    return res


def check_separation_soundness(rng, n=1000):
    def body(res, rng, kind):
        aset, s, x = instance(rng, kind)
        q = sample_dual_measures(aset, n_random=500, seed=int(rng.integers(2**31)))
        y = x.payoff if rng.random() < 0.5 else mix(x, s, intrinsic_risk(aset, s, x).value).payoff
        direct = aset.contains(y)
        sep = membership_via_separation(aset, y, q)
        res.record(sep or not direct, note=f"{kind}: separated an acceptable payoff")
    return _run("separation_soundness", n, CONVEX_KINDS, rng, body)


SUITE: Dict[str, Callable] = {
    "relevance": check_relevance,
    "boundary": check_boundary,
    "up_set": check_up_set,
    "interior_link": check_interior_link,
    "monotone_elementwise": check_monotone_elementwise,
    "monotone_returnwise": check_monotone_returnwise,
    "quasi_convex_positions": check_quasi_convex_positions,
    "quasi_convex_assets": check_quasi_convex_assets,
    "scale_invariance": check_scale_invariance,
    "s_additivity": check_s_additivity,
    "positive_homogeneity": check_positive_homogeneity,
    "translation": check_translation,
    "scaled_altered": check_scaled_altered,
    "separation_soundness": check_separation_soundness,
}


def run_suite(seed: int = 0, instances: int = 1000, names: Sequence[str] = None) -> List[PropertyResult]:
    """Run the named checks (default: all), each on its own seeded stream."""
    names = list(SUITE) if names is None else list(names)
    seeds = np.random.SeedSequence(seed).spawn(len(SUITE))
    streams = dict(zip(SUITE, seeds))
    return [SUITE[name](np.random.default_rng(streams[name]), instances) for name in names]
