"""Fair-trading Edgeworth dynamics on probability-weighted networks."""

from .economy import (
    Allocation,
    UtilityParams,
    eval_gradient,
    eval_utility,
    feasibility_check,
    gradient_matrix,
    mrs_dispersion,
    potential,
    utilities,
)
from .dynamics import (
    TradeField,
    invariant_report,
    multilateral_fair_solver,
    network_trade_field,
    pairwise_additive_inverse_check,
    pairwise_fair_direction,
)
from .networks import NetworkSpec, barycentric_color, simplex_grid, star, weights_from_probabilities
from .integrate import (
    EquilibriumRecord,
    IntegratorConfig,
    Status,
    Trajectory,
    equal_gains_check,
    integrate,
    integrate_to_equilibrium,
    step,
)
from .oracles import brute_force_pareto_check, contract_curve_two_agent_cd, walras_two_agent_cd
from .scenario import Scenario, bundled_scenarios, load_scenario
from .sweep import ManifoldDataset, run_sweep

__version__ = "0.1.0"
