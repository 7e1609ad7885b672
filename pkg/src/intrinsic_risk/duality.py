"""Penalty functions and the dual side of intrinsic risk on convex sets.

The penalty of a measure ``Q`` is ``alpha(Q, A) = inf_{Y in A} E_Q[Y]``;
its negative is the minimal penalty of the classical convex duality.  For a
closed convex set, ``Y`` is acceptable iff ``E_Q[Y] >= alpha(Q, A)`` for
every ``Q``, and the intrinsic risk is the supremum over ``Q`` of

    (alpha(Q, A) - E_Q[X_T])^+ / ((X_0 / S_0) E_Q[S_T] - E_Q[X_T]).

Here these quantities are evaluated on finite measure samples, which makes
the dual route an independent check on the primal bisection.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .acceptance import AcceptanceSet, ESSet, GeneratorSet
from .errors import PreconditionError, StructuralError
from .monetary import check_eligible
from .scenario import PROB_TOL, DualMeasure, EligibleAsset, Position

#: Largest space for which dual polytopes are enumerated vertex by vertex.
MAX_ENUM_SCENARIOS = 12
SEPARATION_MARGIN = 1e-9
DENOMINATOR_GUARD = 1e-12
# Must stay well below SEPARATION_MARGIN: a looser fit admits near-miss bases.
_REPRESENTATION_TOL = 1e-13


@dataclass(frozen=True)
class PenaltyValue:
    value: float
    minimizer: Optional[np.ndarray] = None

    @property
    def alpha_min(self) -> float:
        return -self.value


def _require_convex(aset: AcceptanceSet) -> None:
    f = aset.flags
    if not (f.convex and f.closed):
        raise PreconditionError(f"duality needs a closed convex set, got kind '{aset.kind}'")


def _as_matrix(aset: AcceptanceSet, measures) -> np.ndarray:
    if isinstance(measures, DualMeasure):
        measures = [measures]
    rows = [np.asarray(getattr(q, "weights", q), dtype=float) for q in measures]
    if not rows:
        return np.zeros((0, aset.space.size))
    q = np.vstack(rows)
    if q.shape[1] != aset.space.size:
        raise StructuralError(f"measures have {q.shape[1]} weights, space has {aset.space.size}")
    return q


def penalties(aset: AcceptanceSet, measures) -> np.ndarray:
    """Vectorised :func:`penalty` values (``-inf`` where unbounded)."""
    _require_convex(aset)
    q = _as_matrix(aset, measures)
    if isinstance(aset, ESSet):
        return _es_penalties(aset, q)
    if isinstance(aset, GeneratorSet):
        return _generator_penalties(aset.generators, aset.bounds, q)
    raise PreconditionError(f"no penalty available for acceptance-set kind '{aset.kind}'")


def penalty(aset: AcceptanceSet, q) -> PenaltyValue:
    """``inf{E_Q[Y] : Y acceptable}`` for a single measure."""
    value = float(penalties(aset, [q])[0])
    minimizer = None
    if isinstance(aset, ESSet) and value == 0.0:
        minimizer = np.zeros(aset.space.size)
    return PenaltyValue(value, minimizer)


def _es_penalties(aset: ESSet, q: np.ndarray) -> np.ndarray:
    # coherent: 0 on {q <= p / alpha}, -inf elsewhere
    cap = aset.space.probabilities / aset.alpha
    ok = np.all(q <= cap + PROB_TOL, axis=1)
    return np.where(ok, 0.0, -math.inf)


def _generator_penalties(g: np.ndarray, c: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Solve ``inf{q.y : G y >= c}`` through its dual ``sup{c.mu : G^T mu = q, mu >= 0}``.

    The dual feasible set is a polytope (``mu`` sums to one because every
    row of ``G`` and ``q`` does), so its optimum sits at a basic feasible
    solution.  Those are enumerated over linearly independent subsets of
    generators; an empty dual means the primal is unbounded below.
    """
    k, n = g.shape
    best = np.full(q.shape[0], -math.inf)
    for size in range(1, min(k, n) + 1):
        for idx in itertools.combinations(range(k), size):
            sub = g[list(idx)]
            if np.linalg.matrix_rank(sub) < size:
                continue
            mu = q @ np.linalg.pinv(sub)
            resid = np.max(np.abs(mu @ sub - q), axis=1)
            ok = (resid <= _REPRESENTATION_TOL) & np.all(mu >= -_REPRESENTATION_TOL, axis=1)
            value = mu @ c[list(idx)]
            best = np.where(ok, np.maximum(best, value), best)
    return best


def coherent_dual_set(aset: AcceptanceSet) -> np.ndarray:
    """Extreme points of the dual set of a coherent acceptance set.

    For ES these are the vertices of ``{q : 0 <= q_i <= p_i / alpha,
    sum q = 1}``: every coordinate sits at a bound except at most one.
    For conic generator sets the generators themselves are returned.
    """
    f = aset.flags
    if not (f.conic and f.convex):
        raise PreconditionError("coherent dual set needs a conic convex acceptance set")
    if isinstance(aset, GeneratorSet):
        return np.array(aset.generators)
    if not isinstance(aset, ESSet):
        raise PreconditionError(f"no dual description for acceptance-set kind '{aset.kind}'")
    n = aset.space.size
    if n > MAX_ENUM_SCENARIOS:
        raise StructuralError(
            f"vertex enumeration is capped at {MAX_ENUM_SCENARIOS} scenarios; "
            "use sample_dual_measures for larger spaces"
        )
    cap = aset.space.probabilities / aset.alpha
    patterns = np.array(list(itertools.product((0.0, 1.0), repeat=n - 1)))
    found = []
    for free in range(n):
        others = [i for i in range(n) if i != free]
        base = np.zeros((patterns.shape[0], n))
        base[:, others] = patterns * cap[others]
        rest = 1.0 - base.sum(axis=1)
        ok = (rest >= -PROB_TOL) & (rest <= cap[free] + PROB_TOL)
        base[:, free] = np.clip(rest, 0.0, None)
        found.append(base[ok])
    verts = np.vstack(found)
    return np.unique(np.round(verts, 14), axis=0)


def sample_dual_measures(aset: AcceptanceSet, n_random: int = 10_000, seed: int = 0,
                         concentration: float = 0.1,
                         include_vertices: bool = True) -> np.ndarray:
    """Measures on which to evaluate dual formulas.

    ES: exact vertex list up to 12 scenarios, otherwise ``n_random`` random
    vertices (greedy fill along a random scenario order).  Generator sets:
    random convex combinations of the generators with Dirichlet weights of
    the given concentration, optionally preceded by the generators.
    """
    rng = np.random.default_rng(seed)
    if isinstance(aset, ESSet):
        if aset.space.size <= MAX_ENUM_SCENARIOS:
            return coherent_dual_set(aset)
        return _random_es_vertices(aset, n_random, rng)
    if isinstance(aset, GeneratorSet):
        g = aset.generators
        w = rng.dirichlet(np.full(g.shape[0], concentration), size=n_random)
        sample = w @ g
        sample /= sample.sum(axis=1, keepdims=True)
        if include_vertices:
            sample = np.vstack([g, sample])
        return sample
    raise PreconditionError(f"no dual sampler for acceptance-set kind '{aset.kind}'")


def _random_es_vertices(aset: ESSet, n: int, rng: np.random.Generator) -> np.ndarray:
    cap = aset.space.probabilities / aset.alpha
    out = np.zeros((n, cap.size))
    for row in range(n):
        remaining = 1.0
        for i in rng.permutation(cap.size):
            take = min(cap[i], remaining)
            out[row, i] = take
            remaining -= take
            if remaining <= 0.0:
                break
    return out


def membership_via_separation(aset: AcceptanceSet, payoff, measures) -> bool:
    """False iff some sampled ``Q`` separates ``payoff`` from the set."""
    q = _as_matrix(aset, measures)
    pen = penalties(aset, q)
    expect = q @ np.asarray(payoff, dtype=float)
    return not bool(np.any(pen > expect + SEPARATION_MARGIN))


def intrinsic_dual(aset: AcceptanceSet, s: EligibleAsset, x: Position, measures) -> float:
    """Supremum of the dual ratio over the sampled measures.

    Measures with infinite penalty, or with a denominator below
    ``DENOMINATOR_GUARD`` (where the numerator cannot be positive), are
    skipped.  The result is a lower bound on the intrinsic risk and equals it
    once the sample contains the maximising extreme point.
    """
    f = aset.flags
    if not (f.convex and f.closed and f.contains_zero):
        raise PreconditionError("dual representation needs a closed convex set containing 0")
    check_eligible(aset, s)
    q = _as_matrix(aset, measures)
    pen = penalties(aset, q)
    ex = q @ x.payoff
    es = q @ s.payoff
    num = pen - ex
    den = (x.initial_value / s.initial_price) * es - ex
    valid = np.isfinite(pen) & (den > DENOMINATOR_GUARD)
    if not np.any(valid):
        return 0.0
    ratios = np.maximum(num[valid], 0.0) / den[valid]
    return float(np.max(ratios))


def coherent_risk_dual(aset: AcceptanceSet, x_T) -> float:
    """``sup_Q E_Q[-X_T]`` over the coherent dual set (ES only)."""
    verts = coherent_dual_set(aset)
    return float(np.max(verts @ (-np.asarray(x_T, dtype=float))))
