import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import bisect

from rbcom.errors import ConfigError, DomainError
from rbcom.pv_dc import (
    PVParams,
    current_at_voltage,
    diode_current,
    iv_curve,
    open_circuit_voltage,
    output_vs_photocurrent,
    photocurrent,
    solve_operating_point,
)

PV = PVParams()


def bisection_current(I_ph, R_L, p=PV):
    """Reference solve in the junction voltage, plain bisection to float resolution."""
    R = R_L + p.R_s
    a = p.n_s * p.n * p.V_T

    def k(V):
        return I_ph - p.I_0 * math.expm1(V / a) - V / p.R_sh - V / R

    if I_ph == 0:
        return 0.0
    V = bisect(k, 0.0, a * math.log1p(I_ph / p.I_0), xtol=1e-15, rtol=1e-15, maxiter=500)
    return V / R


def test_photocurrent_anchor():
    assert photocurrent(0.2, PV) == pytest.approx(0.1492, rel=1e-12)
    with pytest.raises(DomainError):
        photocurrent(-1.0, PV)


def test_diode_current_value():
    expect = 9.381e-9 * math.expm1(0.28329 / (1.318 * PV.V_T))
    assert diode_current(0.28329, PV) == pytest.approx(expect, rel=1e-14)
    assert diode_current(0.28329, PV) == pytest.approx(4.03e-5, rel=1e-2)


def test_diode_overflow_guard():
    with pytest.raises(DomainError):
        diode_current(30.0, PV)


def test_nominal_operating_point():
    op = solve_operating_point(0.1492, 0.6, PV)
    assert op.I_pv_o == pytest.approx(0.14910, abs=5e-5)
    assert op.P_chg == pytest.approx(13.34e-3, rel=1e-3)
    assert op.V_d == pytest.approx(0.2833, abs=1e-4)
    assert abs(op.residual) < 1e-12 * 0.1492


def test_kirchhoff_identities():
    op = solve_operating_point(0.1492, 0.6, PV)
    I_sh = op.V_d / PV.R_sh
    assert op.I_ph - op.I_d - I_sh - op.I_pv_o == pytest.approx(0, abs=1e-13)
    assert op.V_d - (op.V_pv_o + op.I_pv_o * PV.R_s) == pytest.approx(0, abs=1e-15)
    assert op.P_chg == pytest.approx(op.I_pv_o**2 * op.R_L, rel=1e-15)


def test_zero_light():
    op = solve_operating_point(0.0, 1.0, PV)
    assert op.I_pv_o == 0 and op.P_chg == 0


@pytest.mark.parametrize("I_ph,R_L", [(-1e-3, 1.0), (0.1, 0.0), (0.1, -1.0)])
def test_domain_errors(I_ph, R_L):
    with pytest.raises(DomainError):
        solve_operating_point(I_ph, R_L, PV)


def test_extreme_load_converges():
    # open-circuit-like load drives the diode hard; must not overflow
    op = solve_operating_point(0.5, 1e6, PV)
    assert 0 <= op.I_pv_o < 1e-6
    assert abs(op.residual) <= 1e-12 * 0.5


@settings(max_examples=300, derandomize=True)
@given(st.floats(0.0, 0.5), st.floats(0.1, 100.0))
def test_newton_matches_bisection(I_ph, R_L):
    op = solve_operating_point(I_ph, R_L, PV)
    assert op.I_pv_o == pytest.approx(bisection_current(I_ph, R_L), abs=1e-10)


@settings(max_examples=300, derandomize=True)
@given(st.floats(0.0, 0.5), st.floats(0.01, 1000.0))
def test_output_bounded_by_photocurrent(I_ph, R_L):
    op = solve_operating_point(I_ph, R_L, PV)
    assert 0.0 <= op.I_pv_o <= I_ph
    assert op.P_chg <= op.V_d * I_ph + 1e-300


@settings(max_examples=300, derandomize=True)
@given(st.floats(1e-4, 0.5), st.floats(0.01, 100.0), st.floats(1.0, 10.0))
def test_output_non_increasing_in_load(I_ph, R_L, factor):
    lo = solve_operating_point(I_ph, R_L, PV).I_pv_o
    hi = solve_operating_point(I_ph, R_L * factor, PV).I_pv_o
    assert hi <= lo + 1e-12 * I_ph


@settings(max_examples=100, derandomize=True)
@given(st.floats(1e-3, 0.5), st.floats(0.1, 100.0))
def test_residual_sign_change(I_ph, R_L):
    R = R_L + PV.R_s

    def g(I):
        return I_ph - PV.I_0 * math.expm1(I * R / (PV.n * PV.V_T)) - I * R / PV.R_sh - I

    # upper end: where the diode alone would carry all of I_ph (avoids exp overflow)
    hi = min(I_ph, PV.n * PV.V_T * math.log1p(I_ph / PV.I_0) / R)
    assert g(0.0) > 0 and g(hi) < 0


@pytest.mark.parametrize("n_s", [1, 3])
def test_cell_count(n_s):
    p = PVParams(n_s=n_s)
    op = solve_operating_point(0.1, 5.0, p)
    assert op.I_pv_o == pytest.approx(bisection_current(0.1, 5.0, p), abs=1e-10)


def test_iv_curve_endpoints_and_shape():
    V_oc = open_circuit_voltage(0.1492, PV)
    V, I = iv_curve(0.1492, np.linspace(0, V_oc, 101), PV)
    assert I[0] == pytest.approx(0.1492 / (1 + PV.R_s / PV.R_sh), rel=1e-3)
    assert I[-1] == pytest.approx(0.0, abs=1e-12)
    assert np.all(np.diff(I) <= 1e-15)
    # knee of a healthy cell sits in the upper part of the voltage range
    assert 0.3 < V_oc < 0.6


def test_current_at_voltage_beyond_voc():
    V_oc = open_circuit_voltage(0.1, PV)
    with pytest.raises(DomainError):
        current_at_voltage(V_oc + 0.05, 0.1, PV)


def test_iv_curve_rejects_negative_voltage():
    with pytest.raises(DomainError):
        iv_curve(0.1, [-0.1, 0.0], PV)


def test_output_vs_photocurrent_segments():
    I_ph, I = output_vs_photocurrent(0.6, np.linspace(0, 0.5, 501), PV)
    slope = np.diff(I) / np.diff(I_ph)
    assert np.all(np.diff(I) >= 0)
    assert 0.99 < slope[0] < 1.0
    # the bend: slope collapses once the diode takes over
    assert slope[-1] < 0.1
    assert np.all(np.diff(slope) <= 1e-6)


@pytest.mark.parametrize(
    "kwargs,field",
    [({"I_0": 0}, "I_0"), ({"n": 0.5}, "n"), ({"n_s": 0}, "n_s"), ({"T": 0}, "T"), ({"R_s": -1}, "R_s"), ({"R_sh": 0}, "R_sh")],
)
def test_param_validation(kwargs, field):
    with pytest.raises(ConfigError) as exc:
        PVParams(**kwargs)
    assert exc.value.field == field
