from .newton import interior_feasible, multiplier_jacobian, solve_multipliers, stacked_residual

__all__ = [
    'interior_feasible',
    'multiplier_jacobian',
    'solve_multipliers',
    'stacked_residual',
]
