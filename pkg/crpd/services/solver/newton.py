"""
Safeguarded Newton solve of the two-constraint multiplier system

    Psi_1 = (1/n) sum w_i - 1 = 0
    Psi_2 = (1/n) sum w_i g_i = 0

in the unknowns (lam, delta_shift), with w_i = n * pi_i the implied weights.
"""

import logging
from typing import Optional, Tuple

import numpy as np
import scipy.linalg
from scipy.optimize import linprog

from crpd.core.exceptions import (
    DimensionMismatch,
    InfeasibleIndex,
    InfeasibleProblem,
    MaxIterations,
    NoDescent,
    SingularJacobian,
)
from crpd.models.gamma import Gamma
from crpd.models.solver import MultiplierState, SolverConfig
from crpd.services.divergence import index_terms

logger = logging.getLogger(__name__)

# smallest admissible eigenvalue ratio of the second-moment matrix
OMEGA_CONDITION_FLOOR = 1e-12

# minimum LP weight margin counted as an interior point
INTERIOR_MARGIN = 1e-12


def _as_moment_matrix(g_values) -> np.ndarray:
    g = np.asarray(g_values, dtype=float)
    if g.ndim == 1:
        g = g[:, None]
    if g.ndim != 2:
        raise DimensionMismatch("moment values must form an n x q matrix")
    if not np.all(np.isfinite(g)):
        raise DimensionMismatch("moment values contain non-finite entries")
    return g


def _evaluate(g: np.ndarray, x: np.ndarray, gamma: Gamma, kappa_pos: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Weights, slopes and stacked residual at x = (lam, delta_shift)"""
    t = x[-1] + g @ x[:-1]
    w, d = index_terms(t, gamma, kappa_pos)
    residual = np.concatenate(([np.mean(w) - 1.0], g.T @ w / g.shape[0]))
    return w, d, residual


def _jacobian(g: np.ndarray, d: np.ndarray) -> np.ndarray:
    """
    Jacobian of (Psi_1, Psi_2) with respect to (lam', delta_shift):

        [[-(1/n) sum d_i g_i',    -(1/n) sum d_i    ],
         [-(1/n) sum d_i g_i g_i', -(1/n) sum d_i g_i]]
    """
    n, q = g.shape
    dg = g * d[:, None]
    jac = np.empty((q + 1, q + 1))
    jac[0, :q] = -dg.sum(axis=0) / n
    jac[0, q] = -d.sum() / n
    jac[1:, :q] = -(g.T @ dg) / n
    jac[1:, q] = -dg.sum(axis=0) / n
    return jac


def interior_feasible(g_values) -> bool:
    """
    Whether some strictly positive probability vector satisfies sum pi_i g_i = 0

    Solves max m subject to sum p_i g_i = 0, sum p_i = 1, p_i >= m.
    """
    g = _as_moment_matrix(g_values)
    n, q = g.shape
    c = np.zeros(n + 1)
    c[-1] = -1.0
    a_eq = np.zeros((q + 1, n + 1))
    a_eq[:q, :n] = g.T
    a_eq[q, :n] = 1.0
    b_eq = np.zeros(q + 1)
    b_eq[q] = 1.0
    a_ub = np.hstack([-np.eye(n), np.ones((n, 1))])
    b_ub = np.zeros(n)
    bounds = [(0.0, None)] * n + [(None, 1.0)]
    result = linprog(c, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=b_eq, bounds=bounds, method="highs")
    if result.status != 0:
        return False
    return -result.fun > INTERIOR_MARGIN


def _check_start(g: np.ndarray) -> None:
    n, q = g.shape
    omega = g.T @ g / n
    eig = np.linalg.eigvalsh(omega)
    if not eig[-1] > 0 or eig[0] <= OMEGA_CONDITION_FLOOR * eig[-1]:
        raise SingularJacobian(
            f"second-moment matrix of the moments is not positive definite (eigenvalues {eig[0]:.3g}..{eig[-1]:.3g})"
        )
    g_bar = g.mean(axis=0)
    schur = 1.0 - g_bar @ scipy.linalg.solve(omega, g_bar, assume_a="pos")
    if schur <= 0:
        raise SingularJacobian(f"Schur complement 1 - g_bar' Omega^-1 g_bar = {schur:.3g} is not positive")


def _fail(g: np.ndarray, error_cls, detail: str):
    if not interior_feasible(g):
        raise InfeasibleProblem(
            "moment conditions cannot be met by strictly positive weights at this parameter value"
        )
    raise error_cls(detail)


def solve_multipliers(g_values, gamma: Gamma, config: Optional[SolverConfig] = None,
                      warm_start: Optional[MultiplierState] = None) -> MultiplierState:
    """
    Solve the multiplier system at fixed moment values

    Args:
        g_values: n x q matrix of moment values g_i(theta)
        gamma: Power parameter
        config: Solver settings
        warm_start: Previous solution used as the starting point

    Returns:
        Converged MultiplierState

    Raises:
        DimensionMismatch: If n <= q or the values are not finite
        SingularJacobian: If the second-moment matrix or the starting Jacobian is singular
        NoDescent: If backtracking cannot reduce the residual
        MaxIterations: If the iteration budget is exhausted
        InfeasibleProblem: If no strictly positive weights satisfy the moments
    """
    config = config or SolverConfig()
    g = _as_moment_matrix(g_values)
    n, q = g.shape
    if n <= q:
        raise DimensionMismatch(f"need more observations than moments, got n = {n}, q = {q}")
    _check_start(g)

    x = np.zeros(q + 1)
    if warm_start is not None and warm_start.lam.size == q:
        x[:q] = warm_start.lam
        x[q] = warm_start.delta_shift
    try:
        w, d, residual = _evaluate(g, x, gamma, config.kappa_pos)
    except InfeasibleIndex:
        x = np.zeros(q + 1)
        w, d, residual = _evaluate(g, x, gamma, config.kappa_pos)

    for iteration in range(config.max_iter + 1):
        sup_norm = float(np.max(np.abs(residual)))
        if sup_norm <= config.tol_inner:
            return MultiplierState(
                lam=x[:q],
                delta_shift=float(x[q]),
                weights=w / n,
                residual_norm=sup_norm,
                iterations=iteration,
                converged=True,
            )
        if iteration == config.max_iter:
            break

        try:
            step = scipy.linalg.solve(_jacobian(g, d), -residual)
        except (scipy.linalg.LinAlgError, ValueError) as e:
            _fail(g, SingularJacobian, f"Newton system is singular at iteration {iteration}: {e}")
        if not np.all(np.isfinite(step)):
            _fail(g, SingularJacobian, f"Newton step is not finite at iteration {iteration}")

        norm = float(np.linalg.norm(residual))
        alpha = 1.0
        for _ in range(config.max_backtracks):
            trial = x + alpha * step
            try:
                w_t, d_t, residual_t = _evaluate(g, trial, gamma, config.kappa_pos)
            except InfeasibleIndex:
                alpha *= config.backtrack_factor
                continue
            if np.all(np.isfinite(residual_t)) and np.linalg.norm(residual_t) < norm:
                x, w, d, residual = trial, w_t, d_t, residual_t
                break
            alpha *= config.backtrack_factor
        else:
            _fail(g, NoDescent, f"no descent step after {config.max_backtracks} backtracks (residual {sup_norm:.3e})")
        logger.debug("iteration %d: step %.3g, residual %.3e", iteration, alpha, float(np.max(np.abs(residual))))

    _fail(g, MaxIterations, f"residual {float(np.max(np.abs(residual))):.3e} after {config.max_iter} iterations")


def multiplier_jacobian(g_values, state: MultiplierState, gamma: Gamma,
                        config: Optional[SolverConfig] = None) -> np.ndarray:
    """
    (q+1) x (q+1) Jacobian of the stacked residual at a multiplier state

    Rows are (Psi_1, Psi_2), columns (lam', delta_shift).

    Raises:
        InfeasibleIndex: If the state violates positivity
    """
    config = config or SolverConfig()
    g = _as_moment_matrix(g_values)
    x = np.concatenate((np.asarray(state.lam, dtype=float), [state.delta_shift]))
    _, d, _ = _evaluate(g, x, gamma, config.kappa_pos)
    return _jacobian(g, d)


def stacked_residual(g_values, lam, delta_shift: float, gamma: Gamma,
                     config: Optional[SolverConfig] = None) -> np.ndarray:
    """Residual (Psi_1, Psi_2) at arbitrary multipliers"""
    config = config or SolverConfig()
    g = _as_moment_matrix(g_values)
    x = np.concatenate((np.asarray(lam, dtype=float).ravel(), [delta_shift]))
    _, _, residual = _evaluate(g, x, gamma, config.kappa_pos)
    return residual
