"""
Second-order multiplier quantities and weight-distribution summaries.

B_lambda,n(gamma) = ((1-gamma)/2) Omega^-1 [ (1/n) sum ((Omega^-1 sqrt(n) g_bar)' g_i)^2 g_i ]

is evaluated at whatever parameter value the supplied moments were computed
at; estimation reports evaluate it at theta_hat.
"""

from typing import Optional, Tuple

import numpy as np
import scipy.linalg

from crpd.core.exceptions import SingularOmega
from crpd.models.diagnostics import SecondOrderReport, WeightSummary
from crpd.models.gamma import Branch, Gamma
from crpd.models.solver import MultiplierState


def _omega_factor(g: np.ndarray):
    n = g.shape[0]
    omega = g.T @ g / n
    try:
        return scipy.linalg.cho_factor(omega)
    except scipy.linalg.LinAlgError as e:
        raise SingularOmega(f"second-moment matrix is not positive definite: {e}")


def b_lambda(g_values, gamma: Gamma) -> np.ndarray:
    """
    Second-order multiplier correction B_lambda,n(gamma)

    Args:
        g_values: n x q moment values
        gamma: Power parameter

    Returns:
        q-vector

    Raises:
        SingularOmega: If the second-moment matrix is not positive definite
    """
    g = np.asarray(g_values, dtype=float)
    if g.ndim == 1:
        g = g[:, None]
    n = g.shape[0]
    factor = _omega_factor(g)
    v = scipy.linalg.cho_solve(factor, np.sqrt(n) * g.mean(axis=0))
    projection = g @ v
    inner = (g * (projection ** 2)[:, None]).mean(axis=0)
    return 0.5 * (1.0 - gamma.value) * scipy.linalg.cho_solve(factor, inner)


def lambda_first_order(g_values) -> np.ndarray:
    """First-order multiplier approximation Omega^-1 g_bar"""
    g = np.asarray(g_values, dtype=float)
    if g.ndim == 1:
        g = g[:, None]
    return scipy.linalg.cho_solve(_omega_factor(g), g.mean(axis=0))


def delta_statistic(state: MultiplierState, n: int, gamma: Gamma) -> Tuple[float, Optional[float]]:
    """
    Scaled probability multiplier n * delta_shift and its chi-square scaling

    Returns:
        (n * delta_shift, n * delta_shift / (-(gamma+1)/2)); the second element
        is None on the empirical likelihood branch where the scale vanishes
    """
    stat = n * state.delta_shift
    if gamma.branch == Branch.EL:
        return stat, None
    return stat, stat / (-(gamma.value + 1.0) / 2.0)


def weight_summary(weights) -> WeightSummary:
    """Min, quartiles (linear interpolation), mean and max of a weight vector"""
    w = np.asarray(weights, dtype=float).ravel()
    q1, median, q3 = np.quantile(w, [0.25, 0.5, 0.75], method="linear")
    return WeightSummary(
        minimum=float(w.min()),
        q1=float(q1),
        median=float(median),
        mean=float(w.mean()),
        q3=float(q3),
        maximum=float(w.max()),
    )


def second_order_report(g_values, jacobian_mean, state: MultiplierState, gamma: Gamma) -> SecondOrderReport:
    """
    Full second-order report at one fit

    Args:
        g_values: n x q moment values at the estimate
        jacobian_mean: q x p average moment Jacobian at the estimate
        state: Converged multipliers at the estimate
        gamma: Power parameter
    """
    g = np.asarray(g_values, dtype=float)
    b = b_lambda(g, gamma)
    stat, scaled = delta_statistic(state, g.shape[0], gamma)
    return SecondOrderReport(
        b_lambda=b,
        lambda_first_order=lambda_first_order(g),
        theta_bias_partial=np.asarray(jacobian_mean).T @ b,
        delta_stat=stat,
        delta_stat_scaled=scaled,
        weight_summary=weight_summary(state.weights),
        evaluated_at="theta_hat",
    )
