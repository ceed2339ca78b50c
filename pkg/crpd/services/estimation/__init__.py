from .estimation_service import EstimationService
from .estimator import estimate, profiled_objective, tie_break_argmin

__all__ = ['EstimationService', 'estimate', 'profiled_objective', 'tie_break_argmin']
