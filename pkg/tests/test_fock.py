import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qkerr.fock import (
    DensityMatrix, FockVector, ModelParams, annihilate, choose_cutoff, create,
    density_from_pure, make_coherent, make_pacs, verify_nonlinear_eigenstate)


def poisson_tail(nu, n_max):
    # exact mass strictly above n_max
    p, cum = math.exp(-nu), 0.0
    for n in range(n_max + 1):
        cum += p
        p *= nu / (n + 1)
    return 1 - cum


@pytest.mark.parametrize("nu", [0.1, 1.0, 4.0, 9.0])
@pytest.mark.parametrize("eps", [1e-6, 1e-12])
def test_cutoff_is_minimal_for_poisson(nu, eps):
    n = choose_cutoff(nu, 0, eps)
    # 1 - cumsum loses precision below ~1e-15, so check against a summed tail
    tail = sum(math.exp(-nu + k * math.log(nu) - math.lgamma(k + 1)) for k in range(n + 1, n + 200))
    below = sum(math.exp(-nu + k * math.log(nu) - math.lgamma(k + 1)) for k in range(n, n + 200))
    assert tail < eps <= below
    if eps >= 1e-9:
        assert poisson_tail(nu, n) < eps


def test_cutoff_known_values():
    assert choose_cutoff(0.0, 0) == 1
    assert choose_cutoff(1.0, 0) == 14
    assert choose_cutoff(1.0, 1) == 16
    assert choose_cutoff(1.0, 10) == 29
    assert choose_cutoff(0.0, 4) == 5


def test_cutoff_never_below_m_plus_one():
    for m in range(6):
        assert choose_cutoff(1e-3, m, 1e-3) >= m + 1


def test_params_defaults_and_validation():
    p = ModelParams()
    assert (p.chi, p.nu, p.theta, p.m) == (5.0, 1.0, 0.0, 0)
    assert p.cutoff == choose_cutoff(1.0, 0)
    assert p.revival_time == pytest.approx(math.pi / 5)
    assert p.x0 == pytest.approx(math.sqrt(2))
    assert ModelParams(theta=2 * math.pi + 0.5).theta == pytest.approx(0.5)
    for bad in ({"chi": 0}, {"nu": -1}, {"m": -1}, {"m": 1.5}, {"cutoff": 0}):
        with pytest.raises(ValueError):
            ModelParams(**bad)


def test_from_alpha_and_replace():
    p = ModelParams.from_alpha(1j * 2)
    assert p.nu == pytest.approx(4)
    assert p.alpha == pytest.approx(2j)
    q = p.replace(m=3, cutoff=40)
    assert (q.m, q.cutoff, q.nu) == (3, 40, p.nu)


@settings(max_examples=40, deadline=None)
@given(st.floats(0, 12), st.floats(0, 2 * math.pi), st.integers(0, 12))
def test_states_are_normalized(nu, theta, m):
    p = ModelParams(nu=nu, theta=theta, m=m)
    s = make_pacs(p)
    assert s.norm() == pytest.approx(1.0, abs=1e-12)
    assert np.all(s.amplitudes[:m] == 0)


def test_coherent_amplitudes_against_formula():
    p = ModelParams(nu=2.0, theta=0.3, cutoff=60)
    c = make_coherent(p).amplitudes
    a = p.alpha
    want = np.array([math.exp(-abs(a) ** 2 / 2) * a ** n / math.sqrt(math.factorial(n))
                     for n in range(61)])
    assert np.allclose(c, want, atol=1e-15)


def test_pacs_is_normalized_creation_on_coherent():
    p = ModelParams(nu=1.5, theta=0.7, m=3, cutoff=70)
    cs = np.zeros(80, complex)
    cs[:71] = make_coherent(p.replace(cutoff=70)).amplitudes
    v = create(cs, 3)[:71]
    v /= np.linalg.norm(v)
    assert np.allclose(make_pacs(p).amplitudes, v, atol=1e-13)


def test_vacuum_limit():
    s = make_pacs(ModelParams(nu=0.0, m=2, cutoff=5))
    assert s.amplitudes[2] == 1 and s.norm() == 1


def test_pacs_mean_photon_number():
    # <N> = [(m+1) L_{m+1}(-nu) / L_m(-nu)] - 1 for |alpha, m>
    from qkerr.special import laguerre
    for m in (0, 1, 4):
        nu = 1.7
        s = make_pacs(ModelParams(nu=nu, m=m, cutoff=choose_cutoff(nu, m, 1e-20)))
        want = (m + 1) * laguerre(m + 1, -nu) / laguerre(m, -nu) - 1
        assert s.mean_photon_number() == pytest.approx(want, rel=1e-12)


def test_fock_vector_is_read_only():
    s = FockVector([1, 0, 0])
    with pytest.raises(ValueError):
        s.amplitudes[0] = 2
    with pytest.raises(ValueError):
        FockVector([])


def test_ladder_operators():
    v = np.array([1, 2, 3, 4], dtype=complex)
    assert np.allclose(annihilate(v), [2 * 1, 3 * math.sqrt(2), 4 * math.sqrt(3), 0])
    assert np.allclose(create(v), [0, 1, 2 * math.sqrt(2), 3 * math.sqrt(3)])
    assert np.allclose(annihilate(v, 2), annihilate(annihilate(v)))


@pytest.mark.parametrize("m", [0, 1, 5])
def test_nonlinear_eigenstate(m):
    p = ModelParams(nu=1.3, theta=0.4, m=m)
    assert verify_nonlinear_eigenstate(make_pacs(p), p) < 1e-12


def test_density_hermitian_and_trace():
    s = make_pacs(ModelParams(nu=1, theta=0.9, m=2))
    rho = density_from_pure(s)
    assert np.array_equal(rho.entries, rho.entries.conj().T)
    assert rho.trace() == pytest.approx(1.0, abs=1e-13)
    assert np.all(np.isreal(np.diag(rho.entries)))


def test_density_uses_upper_triangle():
    m = np.array([[1, 2 + 1j], [99, 3]])
    rho = DensityMatrix(m)
    assert rho.entries[1, 0] == 2 - 1j


def test_density_json_round_trip(tmp_path):
    rho = density_from_pure(make_pacs(ModelParams(nu=0.8, theta=1.1, m=1)))
    path = tmp_path / "rho.json"
    rho.save(path)
    back = DensityMatrix.load(path)
    assert back.dim == rho.dim
    assert np.max(np.abs(back.entries - rho.entries)) <= 1e-15
    obj = json.loads(path.read_text())
    assert set(obj) == {"dim", "entries"}


def test_density_json_accepts_one_partner():
    rho = DensityMatrix.from_json({"dim": 2, "entries": [[1, 0, 0.1, 0.2], [0, 0, 0.5, 0], [1, 1, 0.5, 0]]})
    assert rho.entries[0, 1] == pytest.approx(0.1 - 0.2j)
    assert rho.entries[1, 0] == pytest.approx(0.1 + 0.2j)


def test_density_rejects_non_square():
    with pytest.raises(ValueError):
        DensityMatrix(np.zeros((2, 3)))
