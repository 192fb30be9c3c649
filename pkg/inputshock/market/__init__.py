"""Upstream input market: demand with a kink at δ̃, supply, clearing and the ban experiment."""

from .demand import (
    aggregate_demand,
    component_demand,
    demand_m1,
    demand_m2,
    firm_input_demand,
    supply,
)
from .equilibrium import (
    classify_regime,
    component_delta_p,
    equilibrium_curves,
    excess_demand,
    mixture_probability,
    policy_experiment,
    solve_equilibrium,
)
from .schemas import (
    ComponentShift,
    Equilibrium,
    FirmTypeMixture,
    MarketConfig,
    MixtureComponent,
    PolicyExperimentResult,
    Regime,
    SupplyCurve,
    demo_market,
)

__all__ = [
    "FirmTypeMixture",
    "MixtureComponent",
    "SupplyCurve",
    "MarketConfig",
    "Equilibrium",
    "Regime",
    "ComponentShift",
    "PolicyExperimentResult",
    "demo_market",
    "firm_input_demand",
    "demand_m1",
    "demand_m2",
    "component_demand",
    "aggregate_demand",
    "supply",
    "excess_demand",
    "mixture_probability",
    "solve_equilibrium",
    "classify_regime",
    "component_delta_p",
    "policy_experiment",
    "equilibrium_curves",
]
