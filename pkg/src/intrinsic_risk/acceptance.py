"""Acceptance sets on a finite scenario space.

Every set is a monotone membership predicate with declared structural
flags.  Four kinds are provided: Value at Risk, Expected Shortfall,
finitely generated polyhedral sets, and sets induced by an arbitrary risk
functional.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional

import numpy as np

from .errors import DomainError, PreconditionError, StructuralError
from .scenario import (
    PROB_TOL,
    DualMeasure,
    ScenarioSpace,
    disjoint_events,
    lower_tail_mean,
    upper_quantile,
)

#: Slack on the linear constraints of generator sets.
GENERATOR_TOL = 1e-12

__all__ = [
    "Flags",
    "AcceptanceSet",
    "VaRSet",
    "ESSet",
    "GeneratorSet",
    "RiskSet",
    "DualMeasure",
    "is_acceptable",
    "is_interior",
    "interior_certificate",
    "acceptance_from_risk",
    "acceptance_from_config",
    "var_convexity_counterexample",
]


@dataclass(frozen=True)
class Flags:
    monotone: bool = True
    conic: bool = False
    convex: bool = False
    closed: bool = True
    contains_zero: bool = False


class AcceptanceSet:
    """Base class; subclasses implement :meth:`_accepts` on raw arrays."""

    space: ScenarioSpace
    kind: str = ""

    @property
    def flags(self) -> Flags:
        raise NotImplementedError

    def _accepts(self, y: np.ndarray) -> bool:
        raise NotImplementedError

    def contains(self, payoff) -> bool:
        y = np.asarray(payoff, dtype=float)
        if y.shape != (self.space.size,):
            raise StructuralError(
                f"payoff shape {y.shape} does not match {self.space.size} scenarios"
            )
        return self._accepts(y)

    __contains__ = contains

    def shortfall(self, payoff) -> float:
        """A scalar that is ``<= 0`` exactly on acceptable payoffs (for plots)."""
        raise NotImplementedError

    def _check_nontrivial(self, magnitude: float = 1e6) -> None:
        big = self.space.constant(magnitude)
        if not self._accepts(big) or self._accepts(-big):
            raise PreconditionError(
                f"{self.kind} set is trivial: it must accept large constants and reject "
                "large negative ones"
            )


@dataclass(frozen=True, eq=False)
class VaRSet(AcceptanceSet):
    """``{Y : P[Y < 0] <= alpha}`` for ``alpha`` in ``(0, 1/2)``."""

    space: ScenarioSpace
    alpha: float
    kind = "var"

    def __post_init__(self):
        if not 0.0 < self.alpha < 0.5:
            raise DomainError(f"VaR level must lie in (0, 1/2), got {self.alpha!r}")
        self._check_nontrivial()

    @property
    def flags(self) -> Flags:
        return Flags(conic=True, convex=False, closed=True, contains_zero=True)

    def _accepts(self, y):
        return math.fsum(self.space.probabilities[y < 0.0]) <= self.alpha + PROB_TOL

    def shortfall(self, payoff):
        return -upper_quantile(self.space, payoff, self.alpha)


@dataclass(frozen=True, eq=False)
class ESSet(AcceptanceSet):
    """``{Y : ES_alpha(Y) <= 0}`` with the discrete tail-average ES.

    ``alpha`` may be any level in ``(0, 1]``; at ``alpha = 1`` the set is the
    half-space of nonnegative mean.
    """

    space: ScenarioSpace
    alpha: float
    kind = "es"

    def __post_init__(self):
        if not 0.0 < self.alpha <= 1.0:
            raise DomainError(f"ES level must lie in (0, 1], got {self.alpha!r}")
        self._check_nontrivial()

    @property
    def flags(self) -> Flags:
        return Flags(conic=True, convex=True, closed=True, contains_zero=True)

    def _accepts(self, y):
        return lower_tail_mean(self.space, y, self.alpha) >= 0.0

    def shortfall(self, payoff):
        return -lower_tail_mean(self.space, payoff, self.alpha)


@dataclass(frozen=True, eq=False)
class GeneratorSet(AcceptanceSet):
    """``{Y : E_{Q_j}[Y] >= c_j for all j}`` for dual measures ``Q_j``."""

    space: ScenarioSpace
    generators: np.ndarray
    bounds: np.ndarray
    kind = "generator"

    def __post_init__(self):
        g = np.atleast_2d(np.array(self.generators, dtype=float))
        c = np.atleast_1d(np.array(self.bounds, dtype=float))
        if g.shape[1] != self.space.size:
            raise StructuralError(f"generators have {g.shape[1]} columns, space has {self.space.size}")
        if c.shape != (g.shape[0],):
            raise StructuralError(f"{g.shape[0]} generators but {c.size} bounds")
        if not np.all(np.isfinite(c)):
            raise DomainError("generator bounds must be finite")
        for row in g:
            DualMeasure.on(self.space, row)
        g.setflags(write=False)
        c.setflags(write=False)
        object.__setattr__(self, "generators", g)
        object.__setattr__(self, "bounds", c)
        self._check_nontrivial(1e3 * max(1.0, float(np.max(np.abs(c)))))

    @property
    def flags(self) -> Flags:
        return Flags(
            conic=bool(np.all(self.bounds == 0.0)),
            convex=True,
            closed=True,
            contains_zero=bool(np.all(self.bounds <= GENERATOR_TOL)),
        )

    def _accepts(self, y):
        return bool(np.all(self.generators @ y >= self.bounds - GENERATOR_TOL))

    def shortfall(self, payoff):
        return float(np.max(self.bounds - self.generators @ np.asarray(payoff, dtype=float)))


@dataclass(frozen=True, eq=False)
class RiskSet(AcceptanceSet):
    """``{Y : rho(Y) <= 0}`` for a user-supplied risk functional.

    Structural flags cannot be inferred from a black box and are taken as
    declared.
    """

    space: ScenarioSpace
    rho: Callable[[np.ndarray], float] = field(repr=False)
    conic: bool = False
    convex: bool = False
    closed: bool = True
    kind = "risk"

    def __post_init__(self):
        self._check_nontrivial()

    @property
    def flags(self) -> Flags:
        return Flags(
            conic=self.conic,
            convex=self.convex,
            closed=self.closed,
            contains_zero=self._accepts(np.zeros(self.space.size)),
        )

    def _accepts(self, y):
        return float(self.rho(y)) <= 0.0

    def shortfall(self, payoff):
        return float(self.rho(np.asarray(payoff, dtype=float)))


def is_acceptable(aset: AcceptanceSet, payoff) -> bool:
    return aset.contains(payoff)


def interior_certificate(aset: AcceptanceSet, payoff, rel_floor: float = 1e-10) -> Optional[float]:
    """Return some ``eps > 0`` with ``payoff - eps`` acceptable, else ``None``.

    ``eps`` is halved from the payoff's magnitude down to ``rel_floor`` times
    that magnitude; by monotonicity the first acceptable shift is a valid
    certificate.  The certificate is then widened by bisection against the
    last rejected shift.
    """
    if not aset.flags.closed:
        raise PreconditionError("interior test requires a closed acceptance set")
    y = np.asarray(payoff, dtype=float)
    if not aset.contains(y):
        return None
    magnitude = max(1.0, float(np.max(np.abs(y))))
    floor = rel_floor * magnitude
    eps, rejected = magnitude, None
    while eps >= floor:
        if aset._accepts(y - eps):
            break
        rejected = eps
        eps *= 0.5
    else:
        return None
    if rejected is not None:
        lo, hi = eps, rejected
        for _ in range(30):
            mid = 0.5 * (lo + hi)
            if aset._accepts(y - mid):
                lo = mid
            else:
                hi = mid
        eps = lo
    return eps


def is_interior(aset: AcceptanceSet, payoff) -> bool:
    return interior_certificate(aset, payoff) is not None


def acceptance_from_risk(rho: Callable[[np.ndarray], float], space: ScenarioSpace, *,
                         positively_homogeneous: bool = False, convex: bool = False,
                         closed: bool = True) -> RiskSet:
    """Acceptance set ``{Y : rho(Y) <= 0}`` of a risk functional."""
    return RiskSet(space, rho, conic=positively_homogeneous, convex=convex, closed=closed)


def acceptance_from_config(cfg: Mapping, space: ScenarioSpace,
                           alpha: Optional[float] = None) -> AcceptanceSet:
    """Build a set from its JSON description; ``alpha`` overrides the file."""
    kind = str(cfg.get("kind", "")).lower()
    if kind in ("var", "es"):
        level = alpha if alpha is not None else cfg.get("alpha")
        if level is None:
            raise StructuralError(f"'{kind}' set needs an 'alpha' level")
        cls = VaRSet if kind == "var" else ESSet
        return cls(space, float(level))
    if kind == "generator":
        if "generators" not in cfg or "bounds" not in cfg:
            raise StructuralError("'generator' set needs 'generators' and 'bounds'")
        return GeneratorSet(space, cfg["generators"], cfg["bounds"])
    raise StructuralError(f"unknown acceptance-set kind {cfg.get('kind')!r}")


def var_convexity_counterexample(aset: VaRSet):
    """Acceptable ``(-1_A, -1_B)`` whose midpoint is unacceptable.

    Needs two disjoint events of mass exactly ``alpha``; returns ``None``
    when the space has none.
    """
    events = disjoint_events(aset.space, aset.alpha)
    if events is None:
        return None
    a, b = events
    return -aset.space.indicator(a), -aset.space.indicator(b)
