"""Intrinsic risk: the smallest fraction of a position to sell and reinvest.

For a position ``X = (X_0, X_T)`` and eligible asset ``S`` the mixed payoff
``(1 - lam) X_T + lam (X_0 / S_0) S_T`` is acceptable exactly on an
interval ``[R, 1]`` whenever the acceptance set is closed and either conic
or convex with zero in it.  ``intrinsic_risk`` bisects for ``R`` on that
interval; the other helpers are closed forms valid on cones and bounds valid
on convex sets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .acceptance import AcceptanceSet
from .errors import DomainError, PreconditionError, StructuralError
from .monetary import MonetaryRisk, _bisect, check_eligible
from .scenario import EligibleAsset, Position, mix

_PROBES = 8


@dataclass(frozen=True)
class IntrinsicRisk:
    value: float
    method: str
    certificate: Tuple[float, float]

    def __post_init__(self):
        if not 0.0 <= self.value <= 1.0:
            raise DomainError(f"intrinsic risk must lie in [0, 1], got {self.value!r}")


def check_well_defined(aset: AcceptanceSet) -> None:
    """Raise unless ``aset`` is closed and conic, or closed, convex and holds 0."""
    f = aset.flags
    if not f.closed:
        raise PreconditionError("intrinsic risk needs a closed acceptance set (flag 'closed')")
    if not (f.conic or (f.convex and f.contains_zero)):
        missing = "contains_zero" if f.convex else "conic or convex"
        raise PreconditionError(f"intrinsic risk needs a conic set or a convex set holding 0 (flag '{missing}')")


def intrinsic_risk(aset: AcceptanceSet, s: EligibleAsset, x: Position,
                   tol: float = 1e-10) -> IntrinsicRisk:
    """Smallest ``lam`` in ``[0, 1]`` making ``mix(x, s, lam)`` acceptable.

    ``tol`` is the absolute width of the final bracket; ``tol=0`` bisects to
    machine resolution.  When only ``lam = 1`` is acceptable the result is
    exactly 1.
    """
    check_well_defined(aset)
    check_eligible(aset, s)
    if x.payoff.shape != (aset.space.size,):
        raise StructuralError("position lives on a different scenario space")
    xt = x.payoff
    target = (x.initial_value / s.initial_price) * s.payoff

    def accepts(lam):
        return aset._accepts((1.0 - lam) * xt + lam * target)

    if accepts(0.0):
        return IntrinsicRisk(0.0, "bisection", (0.0, 0.0))
    lo, hi = _bisect(accepts, 0.0, 1.0, tol)
    if __debug__:
        for lam in np.linspace(hi, 1.0, _PROBES):
            assert accepts(lam), f"acceptable fractions do not form an up-set at {lam}"
    return IntrinsicRisk(hi, "bisection", (lo, hi))


def _require_conic(aset: AcceptanceSet) -> None:
    f = aset.flags
    if not (f.conic and f.closed):
        raise PreconditionError("closed form requires a closed conic acceptance set")


def _ratio(x0: float, rho: float) -> float:
    if rho == math.inf:
        return 1.0
    plus = max(rho, 0.0)
    return plus / (x0 + plus)


def intrinsic_conic_closed_form(x: Position, rho: MonetaryRisk) -> IntrinsicRisk:
    """``rho^+ / (X_0 + rho^+)`` on closed cones; 1 when ``rho`` is infinite."""
    _require_conic(rho.acceptance)
    value = _ratio(x.initial_value, rho.value)
    return IntrinsicRisk(value, "conic_closed_form", (value, value))


def intrinsic_of_intermediate(r_x: float, alpha: float) -> float:
    """Intrinsic risk after already selling the fraction ``alpha``."""
    if not 0.0 < r_x <= 1.0:
        raise DomainError(f"needs an unacceptable position (0 < r_x <= 1), got {r_x!r}")
    if not 0.0 <= alpha <= r_x:
        raise DomainError(f"fraction already sold must lie in [0, {r_x}], got {alpha!r}")
    if alpha == r_x:
        return 0.0
    return (r_x - alpha) / (1.0 - alpha)


def convex_upper_bound(x: Position, rho: MonetaryRisk) -> float:
    """Upper bound ``rho^+ / (X_0 + rho^+)`` on convex sets containing 0."""
    f = rho.acceptance.flags
    if not (f.convex and f.closed and f.contains_zero):
        raise PreconditionError("upper bound needs a closed convex set containing 0")
    return _ratio(x.initial_value, rho.value)


def altered_position(x: Position, s: EligibleAsset, r: IntrinsicRisk) -> Position:
    return mix(x, s, r.value)
