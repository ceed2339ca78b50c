from .montecarlo import (
    METRIC_COLUMNS,
    aggregate,
    draw_sample,
    metrics_frame,
    multipliers_frame,
    replication_rng,
    run_cell,
    run_study,
)

__all__ = [
    'METRIC_COLUMNS',
    'aggregate',
    'draw_sample',
    'metrics_frame',
    'multipliers_frame',
    'replication_rng',
    'run_cell',
    'run_study',
]
