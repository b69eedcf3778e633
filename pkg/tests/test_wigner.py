import math

import numpy as np
import pytest

from conftest import oracle_params
from qkerr.evolution import evolve
from qkerr.fock import DensityMatrix, ModelParams, density_from_pure, make_pacs
from qkerr.wigner import (
    GridSpec, GridTooSmallError, WignerField, check_boundary, delta, delta_timescan,
    integrate_abs, simpson_2d, simpson_weights, wigner_cs_closed, wigner_grid,
    wigner_pacs_closed, wigner_point, wigner_values)


def fock_wigner(n, beta):
    # W of |n><n| is 2 (-1)^n L_n(4|beta|^2) exp(-2|beta|^2) / pi
    from qkerr.special import laguerre
    r2 = abs(beta) ** 2
    return 2 * (-1) ** n * laguerre(n, 4 * r2) * math.exp(-2 * r2) / math.pi


def test_grid_spec():
    g = GridSpec(1 + 1j, 2.0, 9)
    b1, b2 = g.axes()
    assert g.spacing == pytest.approx(0.5)
    assert b1[0] == pytest.approx(-1) and b2[-1] == pytest.approx(3)
    assert g.mesh()[2, 3] == pytest.approx(b1[2] + 1j * b2[3])
    assert g.refined().points_per_axis == 17
    for bad in ({"points_per_axis": 8}, {"points_per_axis": 7}, {"half_extent": 0}):
        with pytest.raises(ValueError):
            GridSpec(**bad)


def test_default_grid_extent():
    g = GridSpec.default_for(ModelParams(nu=1.0, m=10))
    assert g.half_extent == pytest.approx(1 + 4 * math.sqrt(11))
    assert g.points_per_axis == 201


def test_simpson_exact_for_cubics():
    w = simpson_weights(11, 0.1)
    x = np.linspace(0, 1, 11)
    assert np.dot(w, x ** 3 - 2 * x) == pytest.approx(0.25 - 1, abs=1e-14)
    with pytest.raises(ValueError):
        simpson_weights(10, 0.1)
    vals = np.outer(x ** 2, x ** 3)
    assert simpson_2d(vals, 0.1) == pytest.approx(1 / 12, abs=1e-14)


@pytest.mark.parametrize("n", [0, 1, 2, 5])
def test_number_state_wigner(n):
    c = np.zeros(n + 1)
    c[n] = 1
    rho = DensityMatrix(np.outer(c, c))
    for beta in (0, 0.3 + 0.2j, -1.1j, 1.7):
        assert wigner_point(rho, beta) == pytest.approx(fock_wigner(n, beta), abs=1e-13)


@pytest.mark.parametrize("m", [0, 1, 3, 10])
def test_series_against_closed_form(m, rng):
    p = oracle_params(1.0, m, 0.6)
    rho = density_from_pure(make_pacs(p))
    beta = rng.uniform(-3, 3, 40) + 1j * rng.uniform(-3, 3, 40)
    series = wigner_values(rho, beta)
    closed = wigner_cs_closed(beta, p) if m == 0 else wigner_pacs_closed(beta, p)
    assert np.max(np.abs(series - closed)) < 1e-8
    if m == 0:
        assert np.allclose(wigner_pacs_closed(beta, p), closed, atol=1e-15)


def test_wigner_bounded_by_two_over_pi(rng):
    p = ModelParams(nu=1.0, m=4)
    rho = density_from_pure(evolve(make_pacs(p), 0.17, p.chi))
    beta = rng.uniform(-4, 4, 300) + 1j * rng.uniform(-4, 4, 300)
    assert np.all(np.abs(wigner_values(rho, beta)) <= 2 / np.pi + 1e-12)


def test_batched_evaluation_matches_single():
    p = ModelParams(nu=1.0, m=1)
    rhos = [density_from_pure(evolve(make_pacs(p), t, p.chi)) for t in (0.0, 0.1, 0.2)]
    beta = np.array([[0.1, 1j], [-0.5, 0.7 + 0.7j]])
    stacked = wigner_values(rhos, beta)
    assert stacked.shape == (3, 2, 2)
    for rho, vals in zip(rhos, stacked):
        assert np.allclose(vals, wigner_values(rho, beta), atol=1e-15)


@pytest.mark.parametrize("m", [0, 1, 10])
@pytest.mark.parametrize("frac", [0.0, 1 / 3, 0.5])
def test_normalization_and_reality(m, frac):
    p = ModelParams(nu=1.0, m=m)
    rho = density_from_pure(evolve(make_pacs(p), frac * p.revival_time, p.chi))
    f = wigner_grid(rho, GridSpec.default_for(p))
    assert np.isrealobj(f.values)
    assert f.integral() == pytest.approx(1, abs=2e-3)


def test_field_features():
    p = ModelParams(nu=1.0)
    rho = density_from_pure(evolve(make_pacs(p), p.revival_time / 2, p.chi))
    f = wigner_grid(rho, GridSpec.default_for(p, 101), t=p.revival_time / 2)
    assert f.lobe_count() == 2
    assert f.negative_cells() > 0
    assert wigner_grid(density_from_pure(make_pacs(p)), GridSpec.default_for(p, 101)).negative_cells() == 0
    assert isinstance(f, WignerField)


def test_boundary_check():
    p = ModelParams(nu=4.0)
    rho = density_from_pure(make_pacs(p))
    tiny = GridSpec(0j, 1.0, 21)
    with pytest.raises(GridTooSmallError):
        delta(rho, tiny)
    with pytest.raises(GridTooSmallError):
        check_boundary(wigner_values(rho, tiny.mesh()))


def test_integrate_abs_refinement_of_kinked_function():
    # W = Re beta on a shifted window, so the kink of |W| falls between nodes
    g = GridSpec(0.013 + 0j, 1.0, 21)
    f = lambda b: np.asarray(b).real
    vals = f(g.mesh())
    exact = 1.013 ** 2 + 0.987 ** 2
    refined = abs(integrate_abs(vals, g, f) - exact)
    plain = abs(integrate_abs(vals, g) - exact)
    assert refined < 1e-4
    assert plain > 10 * refined


def test_delta_of_coherent_state_is_zero():
    p = ModelParams(nu=1.0)
    rho = density_from_pure(make_pacs(p))
    assert delta(rho, GridSpec.default_for(p, 101)) == pytest.approx(0, abs=2e-3)


def test_delta_is_positive_for_added_photon():
    p = ModelParams(nu=1.0, m=1)
    assert delta(density_from_pure(make_pacs(p)), GridSpec.default_for(p, 101)) > 0.1


def test_delta_timescan_periodic():
    p = ModelParams(nu=1.0, m=1)
    ts = np.array([0.0, 0.25, 1.0]) * p.revival_time
    out = delta_timescan(make_pacs(p), ts, GridSpec.default_for(p, 81), p.chi)
    assert [s.t_over_trev for s in out] == pytest.approx([0, 0.25, 1])
    assert out[0].delta == pytest.approx(out[2].delta, abs=1e-9)
    assert out[1].delta > out[0].delta
