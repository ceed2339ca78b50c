from .divergence import crpd_divergence, delta_population, implied_weights, index_divergence, index_terms

__all__ = [
    'crpd_divergence',
    'delta_population',
    'implied_weights',
    'index_divergence',
    'index_terms',
]
