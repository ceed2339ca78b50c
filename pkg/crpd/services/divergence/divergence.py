"""
Cressie-Read power divergence against the uniform reference 1/n and the
closed-form map from multipliers to implied observation weights.

All multipliers are carried in the shifted form delta_shift = delta - delta_0,
with delta_0 = -1/(gamma+1), so that the index t_i = delta_shift + lam'g_i and
the base s_i = 1 - gamma * t_i are finite on every branch.
"""

from typing import Tuple

import numpy as np

from crpd.core.config import settings
from crpd.core.exceptions import (
    DimensionMismatch,
    ElBranchDegenerate,
    InfeasibleIndex,
    NonPositiveWeight,
)
from crpd.models.gamma import Branch, Gamma


def crpd_divergence(pi, gamma: Gamma) -> float:
    """
    Divergence of a probability vector from the uniform distribution

    The exponential tilting and empirical likelihood limits are standardized so
    that the uniform vector scores 0 on every branch.

    Args:
        pi: Probability vector of length n
        gamma: Power parameter

    Returns:
        The divergence value (nonnegative for vectors on the simplex)

    Raises:
        DimensionMismatch: If pi is empty
        NonPositiveWeight: If any entry is not strictly positive
    """
    pi = np.asarray(pi, dtype=float).ravel()
    n = pi.size
    if n == 0:
        raise DimensionMismatch("Divergence of an empty weight vector is undefined")
    if np.any(~(pi > 0)):
        bad = int(np.flatnonzero(~(pi > 0))[0])
        raise NonPositiveWeight(f"weight {bad} is {pi[bad]!r}; all weights must be > 0")

    return _divergence(pi, np.log(n * pi), gamma)


def _divergence(pi: np.ndarray, log_ratio: np.ndarray, gamma: Gamma) -> float:
    branch = gamma.branch
    if branch == Branch.ET:
        return float(np.sum(pi * log_ratio))
    if branch == Branch.EL:
        return float(-np.mean(log_ratio))

    g = gamma.value
    # expm1 keeps precision near the two limits
    return float(np.sum(pi * np.expm1(g * log_ratio)) / (g * (g + 1.0)))


def index_divergence(t, gamma: Gamma) -> float:
    """
    Divergence of the implied weights at index t

    log(n pi_i) is taken from t directly (exactly -t on the exponential tilting
    branch), which keeps full precision for weights close to uniform. The
    weights are renormalized to sum to one, so the value is nonnegative and
    does not depend on the solver's adding-up residual.
    """
    t = np.asarray(t, dtype=float).ravel()
    if t.size == 0:
        raise DimensionMismatch("Divergence of an empty weight vector is undefined")
    branch = gamma.branch
    if branch == Branch.ET:
        log_ratio = -t
    elif branch == Branch.EL:
        log_ratio = -np.log1p(t)
    else:
        log_ratio = np.log1p(-gamma.value * t) / gamma.value
    log_ratio = log_ratio - np.log1p(np.mean(np.expm1(log_ratio)))
    return max(_divergence(np.exp(log_ratio) / t.size, log_ratio, gamma), 0.0)


def delta_population(gamma: Gamma) -> float:
    """
    Population value delta_0 = -1/(gamma+1) of the adding-up multiplier

    Raises:
        ElBranchDegenerate: On the empirical likelihood branch, where delta_0
            diverges; the shifted multiplier's reference value there is 0
    """
    if gamma.branch == Branch.EL:
        raise ElBranchDegenerate(
            "delta_0 diverges at gamma = -1; use the shifted multiplier (reference value 0)"
        )
    return -1.0 / (gamma.value + 1.0)


def index_terms(t: np.ndarray, gamma: Gamma, kappa_pos: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    Normalized weights w_i = n * pi_i and slopes d_i = -dw_i/dt_i at index t

    Raises:
        InfeasibleIndex: If the base falls below kappa_pos at some observation
    """
    branch = gamma.branch
    if branch == Branch.ET:
        w = np.exp(-t)
        return w, w

    if branch == Branch.EL:
        s = 1.0 + t
    else:
        s = 1.0 - gamma.value * t

    low = s < kappa_pos
    if np.any(low):
        i = int(np.flatnonzero(low)[0])
        raise InfeasibleIndex(i, float(s[i]))

    if branch == Branch.EL:
        w = 1.0 / s
        return w, w * w

    inv = 1.0 / gamma.value
    w = s ** inv
    return w, w / s


def implied_weights(g_values, lam, delta_shift: float, gamma: Gamma,
                    kappa_pos: float = settings.KAPPA_POS) -> np.ndarray:
    """
    Implied probabilities pi_i = w_i / n for given multipliers

    The result is not renormalized; adding up to one is the solver's constraint.

    Args:
        g_values: n x q matrix of moment values
        lam: Moment multiplier (q-vector)
        delta_shift: Adding-up multiplier minus delta_0
        gamma: Power parameter
        kappa_pos: Positivity floor for the base s_i

    Returns:
        Array of n implied probabilities

    Raises:
        InfeasibleIndex: If positivity is violated at some observation
    """
    g = np.asarray(g_values, dtype=float)
    if g.ndim == 1:
        g = g[:, None]
    lam = np.asarray(lam, dtype=float).ravel()
    if g.shape[1] != lam.size:
        raise DimensionMismatch(f"moment matrix has {g.shape[1]} columns, multiplier has {lam.size}")
    t = delta_shift + g @ lam
    w, _ = index_terms(t, gamma, kappa_pos)
    return w / g.shape[0]
