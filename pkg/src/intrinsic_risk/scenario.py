"""Finite probability spaces and random-variable arithmetic.

A payoff is a plain one-dimensional ``float64`` array with one entry per
scenario.  Positions and eligible assets pair a payoff with a strictly
positive price at inception.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from .errors import DomainError, StructuralError

#: Absolute slack used whenever probability masses are compared.
PROB_TOL = 1e-12

ArrayLike = Union[Sequence[float], np.ndarray]


def _frozen(values: np.ndarray) -> np.ndarray:
    values.setflags(write=False)
    return values


def as_payoff(values: ArrayLike, n: Optional[int] = None) -> np.ndarray:
    """Validate ``values`` as a payoff vector and return a read-only copy."""
    arr = np.array(values, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise StructuralError(f"payoff must be a non-empty vector, got shape {arr.shape}")
    if n is not None and arr.size != n:
        raise StructuralError(f"payoff has {arr.size} entries, expected {n}")
    if not np.all(np.isfinite(arr)):
        raise StructuralError("payoff entries must be finite")
    return _frozen(arr)


@dataclass(frozen=True, eq=False)
class ScenarioSpace:
    """A finite probability space given by its scenario weights.

    Weights must be nonnegative and sum to one within ``PROB_TOL``; they are
    renormalised after validation.  Scenarios of zero weight are kept but
    listed in :attr:`null_scenarios`.
    """

    probabilities: np.ndarray

    def __post_init__(self):
        p = np.array(self.probabilities, dtype=float)
        if p.ndim != 1 or p.size < 1:
            raise StructuralError("probabilities must be a non-empty vector")
        if not np.all(np.isfinite(p)) or np.any(p < 0):
            raise DomainError("probabilities must be finite and nonnegative")
        total = math.fsum(p)
        if abs(total - 1.0) > PROB_TOL:
            raise DomainError(f"probabilities sum to {total!r}, not 1")
        object.__setattr__(self, "probabilities", _frozen(p / total))

    @classmethod
    def uniform(cls, n: int) -> "ScenarioSpace":
        if n < 1:
            raise DomainError("need at least one scenario")
        return cls(np.full(n, 1.0 / n))

    @property
    def size(self) -> int:
        return self.probabilities.size

    @property
    def null_scenarios(self) -> tuple:
        """Indices of zero-weight scenarios."""
        return tuple(int(i) for i in np.flatnonzero(self.probabilities == 0.0))

    def payoff(self, values: ArrayLike) -> np.ndarray:
        return as_payoff(values, self.size)

    def constant(self, c: float) -> np.ndarray:
        return _frozen(np.full(self.size, float(c)))

    def indicator(self, event: Sequence[int]) -> np.ndarray:
        out = np.zeros(self.size)
        out[list(event)] = 1.0
        return _frozen(out)

    def mass(self, event: Sequence[int]) -> float:
        return math.fsum(self.probabilities[list(event)])


@dataclass(frozen=True, eq=False)
class DualMeasure:
    """A probability vector absolutely continuous w.r.t. a scenario space."""

    weights: np.ndarray

    def __post_init__(self):
        w = np.array(self.weights, dtype=float)
        if w.ndim != 1 or w.size == 0:
            raise StructuralError("measure weights must be a non-empty vector")
        if not np.all(np.isfinite(w)) or np.any(w < 0):
            raise DomainError("measure weights must be finite and nonnegative")
        if abs(math.fsum(w) - 1.0) > PROB_TOL:
            raise DomainError("measure weights must sum to 1")
        object.__setattr__(self, "weights", _frozen(w))

    @classmethod
    def on(cls, space: ScenarioSpace, weights: ArrayLike) -> "DualMeasure":
        q = cls(weights)
        if q.weights.size != space.size:
            raise StructuralError(f"measure has {q.weights.size} weights, space has {space.size}")
        if np.any(q.weights[space.probabilities == 0.0] > 0.0):
            raise DomainError("measure charges a null scenario of the base space")
        return q


@dataclass(frozen=True, eq=False)
class Position:
    """Extended financial position ``(X_0, X_T)`` with ``X_0 > 0``."""

    initial_value: float
    payoff: np.ndarray = field(repr=False)

    def __post_init__(self):
        x0 = float(self.initial_value)
        if not (math.isfinite(x0) and x0 > 0):
            raise DomainError(f"initial value must be finite and > 0, got {self.initial_value!r}")
        object.__setattr__(self, "initial_value", x0)
        object.__setattr__(self, "payoff", as_payoff(self.payoff))

    @property
    def returns(self) -> np.ndarray:
        return self.payoff / self.initial_value

    def scaled(self, factor: float) -> "Position":
        return Position(factor * self.initial_value, factor * self.payoff)


@dataclass(frozen=True, eq=False)
class EligibleAsset:
    """Traded asset ``(S_0, S_T)`` with ``S_0 > 0`` and ``S_T >= 0``.

    Acceptability of the payoff depends on the acceptance set and is checked
    when the asset is paired with one.
    """

    initial_price: float
    payoff: np.ndarray = field(repr=False)

    def __post_init__(self):
        s0 = float(self.initial_price)
        if not (math.isfinite(s0) and s0 > 0):
            raise DomainError(f"initial price must be finite and > 0, got {self.initial_price!r}")
        object.__setattr__(self, "initial_price", s0)
        payoff = as_payoff(self.payoff)
        if np.any(payoff < 0):
            raise DomainError("eligible asset payoff must be nonnegative in every scenario")
        object.__setattr__(self, "payoff", payoff)

    @property
    def returns(self) -> np.ndarray:
        return self.payoff / self.initial_price


def _check_dim(space: ScenarioSpace, payoff: np.ndarray) -> np.ndarray:
    payoff = np.asarray(payoff, dtype=float)
    if payoff.shape != (space.size,):
        raise StructuralError(f"payoff shape {payoff.shape} does not match {space.size} scenarios")
    return payoff


def expectation(space: ScenarioSpace, payoff: ArrayLike,
                measure: Optional[Union[DualMeasure, ArrayLike]] = None) -> float:
    """Weighted sum of ``payoff`` under ``measure`` (default: the base weights)."""
    payoff = _check_dim(space, payoff)
    if measure is None:
        q = space.probabilities
    else:
        q = np.asarray(getattr(measure, "weights", measure), dtype=float)
        if q.shape != (space.size,):
            raise StructuralError(f"measure shape {q.shape} does not match {space.size} scenarios")
    return math.fsum(q * payoff)


def mix(x: Position, s: EligibleAsset, lam: float) -> Position:
    """Sell the fraction ``lam`` of ``x`` and reinvest the proceeds in ``s``."""
    lam = float(lam)
    if not 0.0 <= lam <= 1.0:
        raise DomainError(f"mixing fraction must lie in [0, 1], got {lam!r}")
    if x.payoff.shape != s.payoff.shape:
        raise StructuralError("position and asset live on different scenario spaces")
    target = (x.initial_value / s.initial_price) * s.payoff
    return Position(x.initial_value, (1.0 - lam) * x.payoff + lam * target)


def probability_below(space: ScenarioSpace, payoff: ArrayLike, threshold: float) -> float:
    """``P[payoff < threshold]`` with a strict inequality."""
    payoff = _check_dim(space, payoff)
    return math.fsum(space.probabilities[payoff < threshold])


def upper_quantile(space: ScenarioSpace, payoff: ArrayLike, alpha: float) -> float:
    """``sup{x : P[payoff < x] <= alpha}`` for ``0 <= alpha < 1``.

    This is the smallest attained value whose cumulative mass exceeds
    ``alpha``; masses are accumulated in sorted order and compared with
    ``PROB_TOL`` slack.
    """
    payoff = _check_dim(space, payoff)
    p = space.probabilities
    support = p > 0
    values, weights = payoff[support], p[support]
    order = np.argsort(values, kind="stable")
    values, weights = values[order], weights[order]
    cumulative = 0.0
    for i, v in enumerate(values):
        # ties share one breakpoint
        if i + 1 < len(values) and values[i + 1] == v:
            cumulative += weights[i]
            continue
        cumulative += weights[i]
        if cumulative > alpha + PROB_TOL:
            return float(v)
    return float(values[-1])


def lower_tail_mean(space: ScenarioSpace, payoff: ArrayLike, alpha: float) -> float:
    """Average of ``payoff`` over its lowest ``alpha`` of probability mass.

    The atom straddling the ``alpha`` boundary contributes fractionally.
    """
    payoff = _check_dim(space, payoff)
    if not 0.0 < alpha <= 1.0:
        raise DomainError(f"tail level must lie in (0, 1], got {alpha!r}")
    order = np.argsort(payoff, kind="stable")
    remaining = alpha
    parts = []
    for i in order:
        w = space.probabilities[i]
        if w <= 0.0:
            continue
        take = min(w, remaining)
        parts.append(take * payoff[i])
        remaining -= take
        if remaining <= 0.0:
            break
    return math.fsum(parts) / alpha


def event_masses(space: ScenarioSpace, max_size: int = 16) -> np.ndarray:
    """Sorted distinct masses ``P[E]`` over all events ``E``.

    On a finite space only these levels are hit exactly by ``P[X < 0]``;
    a VaR level is grid-aligned when it appears here.
    """
    if space.size > max_size:
        raise StructuralError(f"event enumeration capped at {max_size} scenarios")
    sums = np.zeros(1)
    for w in space.probabilities:
        sums = np.concatenate([sums, sums + w])
    sums = np.unique(np.round(sums, 12))
    return sums


def is_grid_aligned(space: ScenarioSpace, alpha: float) -> bool:
    masses = event_masses(space)
    return bool(np.any(np.abs(masses - alpha) <= PROB_TOL))


def disjoint_events(space: ScenarioSpace, alpha: float) -> Optional[tuple]:
    """Two disjoint events of mass exactly ``alpha``, or ``None``.

    Brute force over subsets; intended for desk-scale spaces.
    """
    idx = range(space.size)
    hits = []
    for r in range(1, space.size + 1):
        for ev in itertools.combinations(idx, r):
            if abs(space.mass(ev) - alpha) <= PROB_TOL:
                hits.append(frozenset(ev))
    for a, b in itertools.combinations(hits, 2):
        if not a & b:
            return tuple(sorted(a)), tuple(sorted(b))
    return None
