import numpy as np
import pytest

from crpd.core.exceptions import DimensionMismatch, ElBranchDegenerate, InfeasibleIndex, NonPositiveWeight
from crpd.models.gamma import Branch, Gamma
from crpd.services.divergence import (
    crpd_divergence,
    delta_population,
    implied_weights,
    index_divergence,
    index_terms,
)

GAMMAS = [-1.0, -0.5, 0.0, 0.5, 1.0]


def _simplex(rng, n):
    pi = rng.uniform(0.05, 1.0, n)
    return pi / pi.sum()


def test_gamma_branches():
    assert Gamma.of(0.0).branch == Branch.ET
    assert Gamma.of(5e-9).branch == Branch.ET
    assert Gamma.of(-1.0).branch == Branch.EL
    assert Gamma.of(-1.0 + 5e-9).branch == Branch.EL
    assert Gamma.of(1e-6).branch == Branch.GENERIC
    assert Gamma.of(0.5).branch == Branch.GENERIC


def test_gamma_rejects_non_finite():
    with pytest.raises(ValueError):
        Gamma.of(float("inf"))


@pytest.mark.parametrize("gamma", GAMMAS + [-2.0, 2.0])
@pytest.mark.parametrize("n", [1, 5, 22])
def test_uniform_scores_zero(gamma, n):
    assert crpd_divergence(np.full(n, 1.0 / n), Gamma.of(gamma)) == pytest.approx(0.0, abs=1e-15)


def test_euclidean_identity_at_gamma_one(rng):
    for _ in range(1000):
        n = int(rng.integers(2, 40))
        pi = _simplex(rng, n)
        expected = 0.5 * n * np.sum((pi - 1.0 / n) ** 2)
        assert abs(crpd_divergence(pi, Gamma.of(1.0)) - expected) <= 1e-12


def test_et_limit_example():
    pi = np.array([0.5, 0.3, 0.2])
    assert crpd_divergence(pi, Gamma.of(1e-5)) == pytest.approx(crpd_divergence(pi, Gamma.of(0.0)), abs=1e-4)


@pytest.mark.parametrize("limit", [0.0, -1.0])
@pytest.mark.parametrize("n", [5, 25])
def test_branch_continuity(rng, limit, n):
    for _ in range(100):
        pi = _simplex(rng, n)
        exact = crpd_divergence(pi, Gamma.of(limit))
        for offset in (-1e-6, 1e-6):
            near = crpd_divergence(pi, Gamma.of(limit + offset))
            assert abs(near - exact) <= 1e-4 * (1.0 + abs(exact))


@pytest.mark.parametrize("gamma", GAMMAS)
def test_nonnegative_and_monotone_along_direction(rng, gamma):
    n = 10
    v = rng.standard_normal(n)
    v -= v.mean()
    v /= np.abs(v).max() * n * 2
    previous = 0.0
    for eps in np.linspace(0.05, 1.0, 20):
        value = crpd_divergence(np.full(n, 1.0 / n) + eps * v, Gamma.of(gamma))
        assert value > previous
        previous = value


def test_divergence_errors():
    with pytest.raises(DimensionMismatch):
        crpd_divergence([], Gamma.of(0.5))
    with pytest.raises(NonPositiveWeight):
        crpd_divergence([0.5, 0.5, 0.0], Gamma.of(0.5))
    with pytest.raises(NonPositiveWeight):
        crpd_divergence([1.2, -0.2], Gamma.of(0.0))


@pytest.mark.parametrize("gamma,expected", [(0.0, -1.0), (1.0, -0.5), (-0.5, -2.0)])
def test_delta_population(gamma, expected):
    assert delta_population(Gamma.of(gamma)) == pytest.approx(expected)


def test_delta_population_el_branch():
    with pytest.raises(ElBranchDegenerate):
        delta_population(Gamma.of(-1.0))


@pytest.mark.parametrize("gamma", GAMMAS + [2.0, -1.7])
def test_population_multipliers_give_uniform_weights(rng, gamma):
    g = rng.standard_normal((12, 2))
    pi = implied_weights(g, np.zeros(2), 0.0, Gamma.of(gamma))
    np.testing.assert_array_equal(pi, np.full(12, 1.0 / 12))


def test_quadratic_branch_weights():
    pi = implied_weights(np.array([[1.0], [-1.0]]), [0.1], 0.0, Gamma.of(1.0))
    np.testing.assert_allclose(pi, [0.9 / 2, 1.1 / 2], rtol=1e-14)


def test_et_zero_moment_keeps_weight():
    pi = implied_weights(np.array([[0.0], [1.0], [-2.0]]), [0.2], 0.0, Gamma.of(0.0))
    assert pi[0] == pytest.approx(1.0 / 3)
    assert pi[1] == pytest.approx(np.exp(-0.2) / 3)


def test_el_weights_are_reciprocal():
    g = np.array([[0.5], [-0.25]])
    pi = implied_weights(g, [0.4], 0.1, Gamma.of(-1.0))
    np.testing.assert_allclose(pi, 1.0 / (1.0 + 0.1 + 0.4 * g[:, 0]) / 2)


def test_infeasible_index_reports_position():
    g = np.array([[0.0], [0.0], [5.0]])
    with pytest.raises(InfeasibleIndex) as excinfo:
        implied_weights(g, [1.0], 0.0, Gamma.of(0.5))
    assert excinfo.value.index == 2
    assert excinfo.value.value == pytest.approx(1.0 - 0.5 * 5.0)
    assert excinfo.value.exit_code == 2


def test_et_branch_has_no_positivity_floor():
    w, d = index_terms(np.array([-50.0, 50.0]), Gamma.of(0.0), 1e-8)
    assert np.all(w > 0)
    np.testing.assert_array_equal(w, d)


@pytest.mark.parametrize("gamma", GAMMAS + [1.5, -1.5])
def test_slopes_match_finite_differences(rng, gamma):
    t = rng.uniform(-0.2, 0.2, 20)
    h = 1e-6
    w_up, _ = index_terms(t + h, Gamma.of(gamma), 1e-8)
    w_down, _ = index_terms(t - h, Gamma.of(gamma), 1e-8)
    _, d = index_terms(t, Gamma.of(gamma), 1e-8)
    np.testing.assert_allclose(d, -(w_up - w_down) / (2 * h), rtol=1e-6)


@pytest.mark.parametrize("gamma", GAMMAS + [1.5])
def test_index_divergence_matches_weight_form(rng, gamma):
    t = rng.uniform(-0.3, 0.3, 15)
    w, _ = index_terms(t, Gamma.of(gamma), 1e-8)
    assert index_divergence(t, Gamma.of(gamma)) == pytest.approx(
        crpd_divergence(w / w.sum(), Gamma.of(gamma)), rel=1e-12, abs=1e-15
    )


@pytest.mark.parametrize("gamma", GAMMAS + [1.5])
def test_index_divergence_ignores_adding_up_residual(gamma):
    # a constant index is uniform weight off by a scale factor
    assert index_divergence(np.full(16, 3e-11), Gamma.of(gamma)) == pytest.approx(0.0, abs=1e-20)
    t = np.linspace(-1e-6, 1e-6, 16) + 5e-11
    assert index_divergence(t, Gamma.of(gamma)) >= 0.0
