from .kfold import cv_loss_moment_instability, cv_loss_prediction_mse, kfold_partition, select_gamma

__all__ = [
    'cv_loss_moment_instability',
    'cv_loss_prediction_mse',
    'kfold_partition',
    'select_gamma',
]
