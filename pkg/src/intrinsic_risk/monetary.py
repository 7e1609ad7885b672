"""Traditional (monetary) risk measures.

``monetary_risk`` finds the smallest capital ``m`` such that buying
``m / S_0`` units of the eligible asset makes a payoff acceptable.  Along
``m`` the membership predicate is monotone (the asset pays off
nonnegatively and every acceptance set is monotone), so a geometric
bracket followed by bisection locates the threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .acceptance import AcceptanceSet, interior_certificate
from .errors import DomainError, NumericalError, PreconditionError, StructuralError
from .scenario import EligibleAsset, Position, ScenarioSpace, lower_tail_mean, upper_quantile

MAX_DOUBLINGS = 60


@dataclass(frozen=True)
class MonetaryRisk:
    """Outcome of a monetary risk computation.

    ``certificate`` is the final ``(rejected, accepted)`` bracket in ``m`` for
    finite values; for infinite values it is the largest ``m`` probed, and
    ``interior_witness`` records that the asset payoff failed the interior
    test.
    """

    value: float
    finite: bool
    certificate: Tuple[float, float]
    acceptance: AcceptanceSet
    scale: float
    interior_witness: Optional[float] = None


def check_eligible(aset: AcceptanceSet, s: EligibleAsset) -> None:
    if s.payoff.shape != (aset.space.size,):
        raise StructuralError("eligible asset lives on a different scenario space")
    if np.any(s.payoff < 0):
        raise PreconditionError("eligible asset payoff must be nonnegative")
    if not aset.contains(s.payoff):
        raise PreconditionError("eligible asset payoff is not acceptable")


def monetary_risk(aset: AcceptanceSet, s: EligibleAsset, x_T, tol: float = 1e-10,
                  max_doublings: int = MAX_DOUBLINGS) -> MonetaryRisk:
    """``inf{m : x_T + (m / S_0) S_T acceptable}``.

    The absolute tolerance is ``tol * scale`` with
    ``scale = max(1, |x_T|_inf, S_0)``.  ``tol=0`` bisects until the bracket
    cannot be split any further.
    """
    check_eligible(aset, s)
    x = np.asarray(x_T, dtype=float)
    if x.shape != (aset.space.size,):
        raise StructuralError("payoff lives on a different scenario space")
    s0, st = s.initial_price, s.payoff
    norm = float(np.max(np.abs(x)))
    scale = max(1.0, norm, s0)
    top = float(np.max(st))
    step = max(norm * s0 / top, 1.0) if top > 0 else scale

    def accepts(m):
        return aset._accepts(x + (m / s0) * st)

    if accepts(0.0):
        hi, lo, m = 0.0, None, -step
        for _ in range(max_doublings + 1):
            if not accepts(m):
                lo = m
                break
            hi, m = m, 2.0 * m
        if lo is None:
            return MonetaryRisk(-math.inf, False, (m, hi), aset, scale)
    else:
        lo, hi, m = 0.0, None, step
        for _ in range(max_doublings + 1):
            if accepts(m):
                hi = m
                break
            lo, m = m, 2.0 * m
        if hi is None:
            eps = interior_certificate(aset, st)
            if eps is not None:
                raise NumericalError(
                    "no acceptable capital found although the asset payoff is interior "
                    f"(eps={eps:g}); the bracket schedule is too short"
                )
            return MonetaryRisk(math.inf, False, (lo, lo), aset, scale)

    lo, hi = _bisect(accepts, lo, hi, tol * scale)
    assert accepts(hi) and not accepts(lo), "membership not monotone along the asset"
    return MonetaryRisk(hi, True, (lo, hi), aset, scale)


def _bisect(accepts, lo: float, hi: float, width: float, max_iter: int = 400):
    """Shrink ``(lo, hi)`` with ``accepts(lo)`` false and ``accepts(hi)`` true."""
    for _ in range(max_iter):
        if hi - lo <= width:
            break
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            break
        if accepts(mid):
            hi = mid
        else:
            lo = mid
    return lo, hi


def value_at_risk(space: ScenarioSpace, x_T, alpha: float) -> float:
    """``inf{m : P[x_T + m < 0] <= alpha}``, the negated upper quantile.

    Exact: sorts the scenario values and accumulates mass.
    """
    if not 0.0 < alpha < 0.5:
        raise DomainError(f"VaR level must lie in (0, 1/2), got {alpha!r}")
    return -upper_quantile(space, x_T, alpha)


def expected_shortfall(space: ScenarioSpace, x_T, alpha: float) -> float:
    """Negated average over the lowest ``alpha`` of probability mass."""
    return -lower_tail_mean(space, x_T, alpha)


def monetary_from_intrinsic(x: Position, r: float) -> float:
    """Capital equivalent ``X_0 r / (1 - r)`` of an intrinsic risk ``r``.

    Returns ``inf`` at ``r = 1``, matching an infinite monetary risk.
    """
    r = float(r)
    if not 0.0 <= r <= 1.0:
        raise DomainError(f"intrinsic risk must lie in [0, 1], got {r!r}")
    if r == 1.0:
        return math.inf
    return x.initial_value * r / (1.0 - r)
