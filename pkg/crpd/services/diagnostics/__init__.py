from .second_order import (
    b_lambda,
    delta_statistic,
    lambda_first_order,
    second_order_report,
    weight_summary,
)

__all__ = [
    'b_lambda',
    'delta_statistic',
    'lambda_first_order',
    'second_order_report',
    'weight_summary',
]
