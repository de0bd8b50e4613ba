from .graph_model import is_valid_outcome, is_stable, is_balanced, is_nash, best_alternative, next_best_set, \
    stability_residual, balance_residual, balance_gaps, validate_matching
from .lp_dynamics import nominal_flow, projected_rhs, kkt_residual, integrate, random_feasible_lp
from .stable_dynamics import f_alpha, f_s, stable_rhs, extract_matching, assemble_lp, run_stable
from .balance_dynamics import balancing_error, balance_rhs, lyapunov_value, run_balanced
from .nash_dynamics import predict_partner, predictions, mutual_pairs, nash_rhs, run_nash
from .oracles import enumerate_matchings, max_weight_matching, lp_relaxation_optimum, lp_relaxation_maximizers, \
    relaxation_optimum_unique, stable_allocation, balanced_allocations, nash_oracle, stable_outcome_exists, \
    small_graph_family
from .scenario_wireless import capacity, pair_capacity, pairing_power, build_graph, improvement_report, \
    inferred_radius, percent_improvement, load_reference_scenario
