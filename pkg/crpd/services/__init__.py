# Core numerics
from .divergence import crpd_divergence, delta_population, implied_weights
from .moments import MomentModel, model_from_binding
from .solver import solve_multipliers

# Estimation and its consumers
from .estimation import EstimationService, estimate
from .diagnostics import second_order_report
from .crossval import select_gamma
from .simulation import run_cell, run_study

__all__ = [
    # Core numerics
    'crpd_divergence',
    'delta_population',
    'implied_weights',
    'MomentModel',
    'model_from_binding',
    'solve_multipliers',

    # Estimation and its consumers
    'EstimationService',
    'estimate',
    'second_order_report',
    'select_gamma',
    'run_cell',
    'run_study',
]
