from .models import (
    MODEL_FACTORIES,
    MomentModel,
    central_moments_model,
    check_jacobian,
    instrumented_mean_model,
    mean_only_model,
    model_from_binding,
    recipe_model,
)

__all__ = [
    'MomentModel',
    'MODEL_FACTORIES',
    'central_moments_model',
    'check_jacobian',
    'instrumented_mean_model',
    'mean_only_model',
    'model_from_binding',
    'recipe_model',
]
