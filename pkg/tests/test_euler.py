import numpy as np
import pytest

from shocklab.errors import PositivityError
from shocklab.euler import (Conserved, GasModel, Primitive, conserved_array,
                            freestream, max_wave_speed, physical_flux,
                            primitive_array, sound_speed, states_positive,
                            to_conserved, to_primitive)


def test_gamma_must_exceed_one():
    with pytest.raises(ValueError):
        GasModel(1.0)


def test_stagnant_unit_state(gas):
    c = to_conserved(Primitive(1.0, 0.0, 0.0, 1.0), gas)
    assert c[:3] == (1.0, 0.0, 0.0)
    assert c.energy == pytest.approx(2.5, rel=1e-14)


def test_freestream_normalization(gas):
    w = freestream(8.0, gas)
    assert w == Primitive(1.4, 8.0, 0.0, 1.0)
    c = to_conserved(w, gas)
    assert np.allclose(c, (1.4, 11.2, 0.0, 47.3), rtol=0, atol=1e-14)
    assert sound_speed(w, gas) == pytest.approx(1.0, abs=1e-15)


def test_roundtrip_random_states(gas):
    # velocities scaled by the sound speed (Mach <= 3.5) so the kinetic
    # energy cancellation stays benign
    rng = np.random.default_rng(1)
    for _ in range(1000):
        rho = rng.uniform(0.01, 10)
        p = rng.uniform(0.01, 10)
        c = np.sqrt(gas.gamma * p / rho)
        w = Primitive(rho, rng.uniform(-3.5, 3.5) * c,
                      rng.uniform(-3.5, 3.5) * c, p)
        back = to_primitive(to_conserved(w, gas), gas)
        assert np.allclose(back, w, rtol=1e-14, atol=0)


def test_positivity_errors(gas):
    with pytest.raises(PositivityError):
        to_conserved(Primitive(-1.0, 0.0, 0.0, 1.0), gas)
    with pytest.raises(PositivityError):
        to_primitive(Conserved(1.0, 10.0, 0.0, 1.0), gas)  # KE > E


def test_positivity_error_carries_index(gas):
    U = conserved_array(np.array([[1.0, 0, 0, 1.0], [1.0, 0, 0, 1.0]]), 1.4)
    U[1, 3] = 0.0  # drives pressure negative
    with pytest.raises(PositivityError) as err:
        primitive_array(U, 1.4)
    assert err.value.volume_index == 1


def test_physical_flux_stagnant(gas):
    F = physical_flux(Primitive(1.0, 0.0, 0.0, 1.0), (1.0, 0.0), gas)
    assert np.allclose(F, (0.0, 1.0, 0.0, 0.0), atol=0)


def test_physical_flux_rotation_equivariance(gas):
    rng = np.random.default_rng(2)
    for _ in range(200):
        w = Primitive(rng.uniform(0.1, 5), rng.uniform(-3, 3),
                      rng.uniform(-3, 3), rng.uniform(0.1, 5))
        t = rng.uniform(0, 2 * np.pi)
        a = rng.uniform(0, 2 * np.pi)
        n = (np.cos(t), np.sin(t))
        F = physical_flux(w, n, gas)
        ca, sa = np.cos(a), np.sin(a)
        wr = Primitive(w.rho, ca * w.u - sa * w.v, sa * w.u + ca * w.v, w.p)
        nr = (ca * n[0] - sa * n[1], sa * n[0] + ca * n[1])
        Fr = physical_flux(wr, nr, gas)
        expect = np.array([F[0], ca * F[1] - sa * F[2],
                           sa * F[1] + ca * F[2], F[3]])
        assert np.allclose(Fr, expect, rtol=1e-12, atol=1e-13)


def test_physical_flux_normal_negation(gas):
    rng = np.random.default_rng(3)
    for _ in range(100):
        w = Primitive(rng.uniform(0.1, 5), rng.uniform(-3, 3),
                      rng.uniform(-3, 3), rng.uniform(0.1, 5))
        n = random_unit(rng)
        F = physical_flux(w, n, gas)
        G = physical_flux(w, (-n[0], -n[1]), gas)
        # qn flips sign: mass/energy negate, momentum negates too
        assert np.allclose(G, -F, rtol=1e-13, atol=1e-14)


def random_unit(rng):
    t = rng.uniform(0, 2 * np.pi)
    return (np.cos(t), np.sin(t))


def test_max_wave_speed_freestream(gas):
    assert max_wave_speed(Primitive(1.4, 8.0, 0.0, 1.0), (1, 0), gas) \
        == pytest.approx(9.0, abs=1e-13)


def test_max_wave_speed_stagnant(gas):
    w = Primitive(2.0, 0.0, 0.0, 3.0)
    assert max_wave_speed(w, (0, 1), gas) == pytest.approx(
        sound_speed(w, gas), abs=0)


def test_max_wave_speed_tangential_independence(gas):
    a = max_wave_speed(Primitive(1.0, 2.0, 0.0, 1.0), (1, 0), gas)
    b = max_wave_speed(Primitive(1.0, 2.0, 5.0, 1.0), (1, 0), gas)
    assert a == b


def test_array_roundtrip_and_checks(gas):
    rng = np.random.default_rng(4)
    W = np.column_stack([rng.uniform(0.1, 5, 500), rng.uniform(-3, 3, 500),
                         rng.uniform(-3, 3, 500), rng.uniform(0.1, 5, 500)])
    U = conserved_array(W, gas.gamma)
    W2 = primitive_array(U, gas.gamma)
    assert np.allclose(W, W2, rtol=1e-14)
    assert states_positive(U, gas.gamma)
    U[3, 0] = -1.0
    assert not states_positive(U, gas.gamma)
    U[3, 0] = np.nan
    assert not states_positive(U, gas.gamma)
