"""Side-by-side comparison of the intrinsic and traditional de-risking actions."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .acceptance import AcceptanceSet
from .intrinsic import (
    IntrinsicRisk,
    altered_position,
    convex_upper_bound,
    intrinsic_conic_closed_form,
    intrinsic_risk,
)
from .monetary import MonetaryRisk, monetary_risk
from .scenario import EligibleAsset, Position

# Finer than the 1e-10 default: the return identity is compared entrywise at 1e-10.
REPORT_TOL = 1e-13


@dataclass(frozen=True)
class Sharpe:
    value: float
    degenerate: bool


def revised_sharpe(space, returns: np.ndarray, benchmark: EligibleAsset) -> Sharpe:
    """Mean over standard deviation of the excess return over ``benchmark``.

    A vanishing standard deviation yields ``nan`` flagged as degenerate.
    """
    p = space.probabilities
    excess = np.asarray(returns) - benchmark.returns
    mean = math.fsum(p * excess)
    var = math.fsum(p * (excess - mean) ** 2)
    sd = math.sqrt(var)
    if sd <= 1e-14 * max(1.0, abs(mean)):
        return Sharpe(math.nan, True)
    return Sharpe(mean / sd, False)


@dataclass(frozen=True)
class RiskReport:
    intrinsic: IntrinsicRisk
    monetary: MonetaryRisk
    capital_intrinsic: float
    capital_traditional: float
    altered_intrinsic: Position
    altered_traditional: Optional[Position]
    return_intrinsic: np.ndarray
    return_traditional: Optional[np.ndarray]
    sharpe_intrinsic: Sharpe
    sharpe_traditional: Optional[Sharpe]
    closed_form: Optional[float] = None
    upper_bound: Optional[float] = None

    def to_dict(self) -> dict:
        def num(v):
            if v is None:
                return None
            if math.isinf(v):
                return "inf" if v > 0 else "-inf"
            if math.isnan(v):
                return None
            return float(v)

        def pos(p):
            if p is None:
                return None
            return {"initial_value": p.initial_value, "payoff": p.payoff.tolist()}

        def sharpe(s):
            if s is None:
                return {"value": None, "degenerate": None}
            return {"value": num(s.value), "degenerate": s.degenerate}

        return {
            "intrinsic": self.intrinsic.value,
            "monetary": num(self.monetary.value),
            "capital": {
                "intrinsic": self.capital_intrinsic,
                "traditional": num(self.capital_traditional),
                "initial_value_intrinsic": self.altered_intrinsic.initial_value,
                "initial_value_traditional": None if self.altered_traditional is None
                else self.altered_traditional.initial_value,
            },
            "altered": {"intrinsic": pos(self.altered_intrinsic), "traditional": pos(self.altered_traditional)},
            "returns": {
                "intrinsic": self.return_intrinsic.tolist(),
                "traditional": None if self.return_traditional is None else self.return_traditional.tolist(),
            },
            "sharpe": {"intrinsic": sharpe(self.sharpe_intrinsic), "traditional": sharpe(self.sharpe_traditional)},
            "certificates": {
                "intrinsic_method": self.intrinsic.method,
                "intrinsic_bracket": list(self.intrinsic.certificate),
                "monetary_finite": self.monetary.finite,
                "monetary_bracket": [num(v) for v in self.monetary.certificate],
                "conic_closed_form": self.closed_form,
                "convex_upper_bound": self.upper_bound,
            },
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def build_report(aset: AcceptanceSet, s: EligibleAsset, x: Position, benchmark: EligibleAsset,
                 tol: float = REPORT_TOL) -> RiskReport:
    """Compute both risk measures, both altered positions and their performance."""
    r = intrinsic_risk(aset, s, x, tol=tol)
    rho = monetary_risk(aset, s, x.payoff, tol=tol)
    space = aset.space

    x_r = altered_position(x, s, r)
    capital_intrinsic = x.initial_value * r.value
    if rho.value == math.inf:
        capital_traditional = math.inf
        x_rho = None
    else:
        capital_traditional = max(rho.value, 0.0)
        x_rho = Position(x.initial_value + capital_traditional,
                         x.payoff + (capital_traditional / s.initial_price) * s.payoff)

    ret_r = x_r.returns
    ret_rho = None if x_rho is None else x_rho.returns
    flags = aset.flags
    closed_form = intrinsic_conic_closed_form(x, rho).value if flags.conic and flags.closed else None
    bound = convex_upper_bound(x, rho) if flags.convex and flags.contains_zero else None
    return RiskReport(
        intrinsic=r,
        monetary=rho,
        capital_intrinsic=capital_intrinsic,
        capital_traditional=capital_traditional,
        altered_intrinsic=x_r,
        altered_traditional=x_rho,
        return_intrinsic=ret_r,
        return_traditional=ret_rho,
        sharpe_intrinsic=revised_sharpe(space, ret_r, benchmark),
        sharpe_traditional=None if ret_rho is None else revised_sharpe(space, ret_rho, benchmark),
        closed_form=closed_form,
        upper_bound=bound,
    )


def render_table(report: RiskReport) -> str:
    d = report.to_dict()

    def fmt(v):
        if v is None:
            return "-"
        if isinstance(v, str):
            return v
        return f"{v:.10g}"

    rows = [
        ("", "intrinsic", "traditional"),
        ("risk", fmt(d["intrinsic"]), fmt(d["monetary"])),
        ("capital", fmt(d["capital"]["intrinsic"]), fmt(d["capital"]["traditional"])),
        ("initial value", fmt(d["capital"]["initial_value_intrinsic"]), fmt(d["capital"]["initial_value_traditional"])),
        ("sharpe", fmt(d["sharpe"]["intrinsic"]["value"]), fmt(d["sharpe"]["traditional"]["value"])),
    ]
    ret_i = d["returns"]["intrinsic"]
    ret_t = d["returns"]["traditional"] or [None] * len(ret_i)
    for k, (a, b) in enumerate(zip(ret_i, ret_t)):
        rows.append((f"return[{k}]", fmt(a), fmt(b)))
    width = [max(len(r[i]) for r in rows) for i in range(3)]
    return "\n".join("  ".join(cell.ljust(w) for cell, w in zip(row, width)).rstrip() for row in rows)
