"""Single-diode PV panel with a resistive load: DC operating point and I-V curves.

The unknown throughout is the panel output current. For a fixed load (or a
fixed terminal voltage) the Kirchhoff residual is strictly decreasing in
that current, so each solve is a scalar root on a known bracket. Newton
steps are taken when they stay inside the bracket; otherwise the step falls
back to bisection.
"""

import math
from dataclasses import dataclass

import numpy as np

from .constants import MAX_EXPONENT, thermal_voltage
from .errors import ConvergenceError, DomainError, require

RTOL = 1e-12
MAX_ITER = 200


@dataclass(frozen=True)
class PVParams:
    I_0: float = 9.381e-9
    n: float = 1.318
    n_s: int = 1
    T: float = 298.15
    R_s: float = 1.3
    R_sh: float = 5000.0
    rho: float = 0.746
    A_pv: float = 1e-4

    def __post_init__(self):
        require(self.I_0 > 0, "I_0", "must be > 0")
        require(self.n >= 1, "n", "must be >= 1")
        require(self.n_s >= 1, "n_s", "must be >= 1")
        require(self.T > 0, "T", "must be > 0")
        require(self.R_s >= 0, "R_s", "must be >= 0")
        require(self.R_sh > 0, "R_sh", "must be > 0")
        require(self.rho > 0, "rho", "must be > 0")
        require(self.A_pv > 0, "A_pv", "must be > 0")

    @property
    def V_T(self):
        return thermal_voltage(self.T)

    @property
    def diode_scale(self):
        """n_s * n * V_T, the exponent scale of the diode law."""
        return self.n_s * self.n * self.V_T


@dataclass(frozen=True)
class OperatingPoint:
    V_pv_o: float
    I_pv_o: float
    V_d: float
    I_d: float
    P_chg: float
    residual: float
    I_ph: float = 0.0
    R_L: float = 0.0

    def as_dict(self):
        return {
            "I_ph_A": self.I_ph,
            "R_L_ohm": self.R_L,
            "V_pv_o_V": self.V_pv_o,
            "I_pv_o_A": self.I_pv_o,
            "V_d_V": self.V_d,
            "I_d_A": self.I_d,
            "P_chg_W": self.P_chg,
            "residual_A": self.residual,
        }


def photocurrent(P_pv_i, p: PVParams):
    P_pv_i = np.asarray(P_pv_i, dtype=float)
    if np.any(P_pv_i < 0):
        raise DomainError("optical power must be >= 0")
    out = p.rho * P_pv_i
    return float(out) if out.ndim == 0 else out


def diode_current(V_d, p: PVParams):
    """Diode forward current; raises instead of overflowing the exponential."""
    x = np.asarray(V_d, dtype=float) / p.diode_scale
    if np.any(x > MAX_EXPONENT):
        raise DomainError(f"diode exponent {np.max(x):.1f} exceeds {MAX_EXPONENT}")
    out = p.I_0 * np.expm1(x)
    return float(out) if out.ndim == 0 else out


def _diode_voltage_limit(I_ph, p):
    # V_d at which the diode alone would sink all of I_ph
    return p.diode_scale * math.log1p(I_ph / p.I_0)


def _solve_decreasing(g, dg, lo, hi, atol):
    """Root of a strictly decreasing g on [lo, hi] with g(lo) >= 0 >= g(hi)."""
    g_lo, g_hi = g(lo), g(hi)
    if g_lo == 0:
        return lo, 0.0
    if g_hi == 0:
        return hi, 0.0
    if g_lo < 0 or g_hi > 0:
        raise ConvergenceError("residual does not change sign over the bracket", (lo, hi), 0)
    x = lo + (hi - lo) * g_lo / (g_lo - g_hi)
    for it in range(1, MAX_ITER + 1):
        gx = g(x)
        if abs(gx) <= atol:
            return x, gx
        if gx > 0:
            lo = x
        else:
            hi = x
        d = dg(x)
        step_ok = d < 0
        if step_ok:
            x_new = x - gx / d
            step_ok = lo < x_new < hi
        if not step_ok:
            x_new = 0.5 * (lo + hi)
        if hi - lo <= 4 * np.finfo(float).eps * max(abs(hi), 1e-300):
            gx_new = g(x_new)
            if abs(gx_new) <= atol:
                return x_new, gx_new
            raise ConvergenceError("bracket collapsed before residual tolerance was met", (lo, hi), it)
        x = x_new
    raise ConvergenceError("iteration cap reached", (lo, hi), MAX_ITER)


def _tolerance(I_ph):
    return RTOL * max(I_ph, 1e-6)


def solve_operating_point(I_ph, R_L, p: PVParams) -> OperatingPoint:
    """Intersection of the panel I-V curve with the load line V = I*R_L.

    Parameters
    ----------
    I_ph : float
        Photocurrent [A], >= 0.
    R_L : float
        Load resistance [ohm], > 0.
    p : PVParams

    Returns
    -------
    OperatingPoint
        ``residual`` is the Kirchhoff current residual at the returned
        current; its magnitude is below ``1e-12 * max(I_ph, 1 uA)``.

    Raises
    ------
    ConvergenceError
        If the iteration cap is hit; the error carries the last bracket.
    """
    if I_ph < 0:
        raise DomainError("photocurrent must be >= 0")
    if R_L <= 0:
        raise DomainError("load resistance must be > 0")
    if I_ph == 0:
        return OperatingPoint(0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, R_L)

    R = R_L + p.R_s
    a = p.diode_scale

    def g(I):
        return I_ph - p.I_0 * math.expm1(I * R / a) - I * R / p.R_sh - I

    def dg(I):
        return -p.I_0 * math.exp(I * R / a) * R / a - R / p.R_sh - 1.0

    hi = min(I_ph, _diode_voltage_limit(I_ph, p) / R)
    I, res = _solve_decreasing(g, dg, 0.0, hi, _tolerance(I_ph))
    V_d = I * R
    return OperatingPoint(
        V_pv_o=I * R_L,
        I_pv_o=I,
        V_d=V_d,
        I_d=p.I_0 * math.expm1(V_d / a),
        P_chg=I * I * R_L,
        residual=res,
        I_ph=I_ph,
        R_L=R_L,
    )


def current_at_voltage(V, I_ph, p: PVParams):
    """Output current at terminal voltage V (0 <= V <= V_oc)."""
    a = p.diode_scale

    def h(I):
        V_d = V + I * p.R_s
        return I_ph - p.I_0 * math.expm1(V_d / a) - V_d / p.R_sh - I

    def dh(I):
        return -p.I_0 * math.exp((V + I * p.R_s) / a) * p.R_s / a - p.R_s / p.R_sh - 1.0

    h0 = h(0.0)
    if h0 < -_tolerance(I_ph):
        raise DomainError(f"voltage {V!r} V exceeds the open-circuit voltage")
    if h0 <= 0:
        return 0.0
    hi = I_ph
    if p.R_s > 0:
        hi = min(hi, max((_diode_voltage_limit(I_ph, p) - V) / p.R_s, 0.0))
    if hi == 0.0:
        return 0.0
    I, _ = _solve_decreasing(h, dh, 0.0, hi, _tolerance(I_ph))
    return I


def open_circuit_voltage(I_ph, p: PVParams):
    """Voltage where the whole photocurrent flows through diode and shunt."""
    if I_ph == 0:
        return 0.0
    a = p.diode_scale

    def k(V):
        return I_ph - p.I_0 * math.expm1(V / a) - V / p.R_sh

    def dk(V):
        return -p.I_0 * math.exp(V / a) / a - 1.0 / p.R_sh

    V, _ = _solve_decreasing(k, dk, 0.0, _diode_voltage_limit(I_ph, p), _tolerance(I_ph))
    return V


def iv_curve(I_ph, V_grid, p: PVParams):
    """Panel I-V characteristic sampled on ``V_grid``; returns (V, I) arrays."""
    V_grid = np.asarray(V_grid, dtype=float)
    if np.any(V_grid < 0):
        raise DomainError("voltage grid must be >= 0")
    I = np.array([current_at_voltage(float(v), I_ph, p) for v in V_grid])
    return V_grid, I


def output_vs_photocurrent(R_L, I_ph_grid, p: PVParams):
    """Output current against photocurrent for a fixed load; returns (I_ph, I_pv_o)."""
    I_ph_grid = np.asarray(I_ph_grid, dtype=float)
    I = np.array([solve_operating_point(float(i), R_L, p).I_pv_o for i in I_ph_grid])
    return I_ph_grid, I
