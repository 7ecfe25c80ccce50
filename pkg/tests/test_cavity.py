import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rbcom.cavity import (
    CavityParams,
    attenuation,
    chain_photocurrent,
    distance_gain,
    distance_gain_limits,
    drive_for_laser_power,
    end_to_end_gain,
    laser_power,
)
from rbcom.errors import ConfigError, DomainError
from rbcom.pump import PumpParams

PUMP = PumpParams()
CAV = CavityParams()
PHYS = CavityParams(eta_d_override=None)
RHO = 0.746


def test_gamma_nominal():
    gamma, beta = end_to_end_gain(PUMP, CAV, RHO)
    assert gamma == pytest.approx(0.0557, rel=5e-3)
    assert beta == 0.0


def test_gamma_from_hand_arithmetic():
    # rho * eta_s*eta_d * eta_e * hc/(q*lambda), computed independently
    photon_v = 6.62607015e-34 * 299792458 / (1.602176634e-19 * 808e-9)
    assert end_to_end_gain(PUMP, CAV, RHO)[0] == pytest.approx(0.746 * 0.054 * 0.9 * photon_v, rel=1e-12)


def test_gamma_linear_in_rho():
    g1 = end_to_end_gain(PUMP, CAV, 0.3)[0]
    g2 = end_to_end_gain(PUMP, CAV, 0.6)[0]
    assert g2 == pytest.approx(2 * g1, rel=1e-14)


def test_offset_gives_beta():
    cav = CavityParams(C_offset=0.01)
    assert end_to_end_gain(PUMP, cav, RHO)[1] == pytest.approx(RHO * 0.01)


def test_distance_required_without_override():
    with pytest.raises(DomainError):
        end_to_end_gain(PUMP, PHYS, RHO)
    g, _ = end_to_end_gain(PUMP, PHYS, RHO, d=2.0)
    assert g > 0


def test_distance_gain_formula():
    d = 3.0
    R, a, lam = PHYS.R, PHYS.a, PHYS.lambda_beam
    expect = 2 * (1 - R) / ((1 + R) * math.exp(-2 * math.pi * a**2 / (lam * d)) - (1 + R) * math.log(R))
    assert distance_gain(d, PHYS) == pytest.approx(expect, rel=1e-14)


def test_distance_gain_rejects_nonpositive():
    with pytest.raises(DomainError):
        distance_gain(0.0, PHYS)


def test_distance_gain_ordering_on_log_grid():
    near, far = distance_gain_limits(PHYS)
    # below ~1 m the diffraction term drops under float resolution and f(d) saturates at the near limit
    d = np.logspace(-3, 5, 400)
    f = distance_gain(d, PHYS)
    assert np.all(np.diff(f) <= 0)
    assert np.all((f <= near) & (f > far))
    assert f[0] == pytest.approx(near, rel=1e-12)
    assert f[-1] == pytest.approx(far, rel=2e-4)
    resolved = d >= 1.0
    assert np.all(np.diff(f[resolved]) < 0)
    assert np.all(f[resolved] < near)


@settings(max_examples=200, derandomize=True)
@given(st.floats(1.0, 1e3), st.floats(1.001, 3.0), st.floats(0.1, 1.0))
def test_distance_gain_monotone(d, ratio, p):
    c = CavityParams(p=p, eta_d_override=None)
    assert distance_gain(d * ratio, c) < distance_gain(d, c)
    c2 = CavityParams(p=min(1.0, p * 1.1), eta_d_override=None)
    if c2.p > c.p:
        assert distance_gain(d, c2) > distance_gain(d, c)


def test_override_ignores_distance():
    assert attenuation(5.0, CAV) == CAV.eta_d_override
    assert attenuation(None, CAV) == CAV.eta_d_override


@settings(max_examples=200, derandomize=True)
@given(st.floats(0.5, 10.0), st.floats(0.0, 0.05), st.one_of(st.none(), st.floats(0.1, 50.0)))
def test_chain_matches_linear_gain(I_in, offset, d):
    cav = CavityParams(C_offset=offset, eta_d_override=None if d is not None else CAV.eta_d_override)
    gamma, beta = end_to_end_gain(PUMP, cav, RHO, d)
    direct = chain_photocurrent(I_in, PUMP, cav, RHO, d)
    expect = gamma * (I_in - PUMP.I_th) + beta
    assert direct == pytest.approx(expect, rel=1e-12, abs=1e-15)


def test_drive_for_laser_power_inverts_chain():
    I = drive_for_laser_power(0.2, PUMP, CAV)
    from rbcom.pump import pump_power

    assert laser_power(pump_power(I, PUMP), None, CAV) == pytest.approx(0.2, rel=1e-14)


def test_laser_power_rejects_negative_pump():
    with pytest.raises(DomainError):
        laser_power(-1.0, None, CAV)


@pytest.mark.parametrize("kwargs,field", [({"R": 1.0}, "R"), ({"a": 0}, "a"), ({"eta_s": 0}, "eta_s")])
def test_param_validation(kwargs, field):
    with pytest.raises(ConfigError) as exc:
        CavityParams(**kwargs)
    assert exc.value.field == field
