"""Intrinsic and monetary risk measures on finite scenario spaces."""

from .acceptance import (
    AcceptanceSet,
    ESSet,
    Flags,
    GeneratorSet,
    RiskSet,
    VaRSet,
    acceptance_from_config,
    acceptance_from_risk,
    interior_certificate,
    is_acceptable,
    is_interior,
)
from .duality import (
    PenaltyValue,
    coherent_dual_set,
    intrinsic_dual,
    membership_via_separation,
    penalty,
    sample_dual_measures,
)
from .errors import (
    DomainError,
    InputError,
    NumericalError,
    PreconditionError,
    RiskError,
    StructuralError,
)
from .intrinsic import (
    IntrinsicRisk,
    altered_position,
    convex_upper_bound,
    intrinsic_conic_closed_form,
    intrinsic_of_intermediate,
    intrinsic_risk,
)
from .monetary import (
    MonetaryRisk,
    expected_shortfall,
    monetary_from_intrinsic,
    monetary_risk,
    value_at_risk,
)
from .report import RiskReport, build_report
from .scenario import (
    DualMeasure,
    EligibleAsset,
    Position,
    ScenarioSpace,
    expectation,
    mix,
    probability_below,
)

__version__ = "0.1.0"
