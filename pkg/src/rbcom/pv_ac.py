"""Bias-dependent small-signal elements of the PV cell.

Two modes are supported. In calibration mode (the default) the dynamic
resistance and total capacitance are fixed to measured values. In physical
mode they are computed from the junction voltage with the formulas below;
clear ``calibration_r``/``calibration_C`` to select it.
"""

import math
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .constants import epsilon_0, q
from .errors import DomainError, QuasiStaticWarning, require
from .pv_dc import OperatingPoint, PVParams

# junction voltage at which the default lifetime was fitted
NOMINAL_V_D = 0.2833
NOMINAL_C = 26.6e-9
NOMINAL_R = 839.5

# omega*tau above this is flagged as outside the quasi-static regime
QUASI_STATIC_LIMIT = 0.1


@dataclass(frozen=True)
class ACCellParams:
    epsilon: float = 11.7
    N_B: float = 1e21
    V_0: float = 0.7
    tau: float = 2.5630062e-05
    calibration_C: Optional[float] = NOMINAL_C
    calibration_r: Optional[float] = NOMINAL_R

    def __post_init__(self):
        require(self.epsilon > 0, "epsilon", "must be > 0")
        require(self.N_B > 0, "N_B", "must be > 0")
        require(self.V_0 > 0, "V_0", "must be > 0")
        require(self.tau > 0, "tau", "must be > 0")
        if self.calibration_C is not None:
            require(self.calibration_C > 0, "calibration_C", "must be > 0 when set")
        if self.calibration_r is not None:
            require(self.calibration_r > 0, "calibration_r", "must be > 0 when set")

    @property
    def calibrated(self):
        return self.calibration_C is not None or self.calibration_r is not None


@dataclass(frozen=True)
class CellSmallSignal:
    """r and C = C_T + C_d at one bias point."""

    V_d: float
    r: float
    C: float
    C_T: float
    C_d: float
    calibrated: bool


def _exp_term(V_d, p):
    # single-junction scale n*V_T: the small-signal laws are per cell
    return p.I_0 * np.exp(np.asarray(V_d, dtype=float) / (p.n * p.V_T))


def dynamic_resistance(V_d, p: PVParams):
    out = p.n * p.V_T / _exp_term(V_d, p)
    return float(out) if np.ndim(out) == 0 else out


def transition_capacitance(V_d, A_pv, a: ACCellParams):
    """Junction transition capacitance, with the nested root as printed in the model."""
    V_d = np.asarray(V_d, dtype=float)
    if np.any(V_d >= a.V_0):
        raise DomainError(f"junction voltage must stay below the built-in voltage {a.V_0} V")
    out = A_pv * np.sqrt(q * a.epsilon * epsilon_0 * a.N_B / (2 * np.sqrt(a.V_0 - V_d)))
    return float(out) if out.ndim == 0 else out


def diffusion_capacitance(V_d, p: PVParams, a: ACCellParams):
    out = a.tau / (2 * p.n * p.V_T) * _exp_term(V_d, p)
    return float(out) if np.ndim(out) == 0 else out


def cell_capacitance(V_d, p: PVParams, a: ACCellParams):
    return transition_capacitance(V_d, p.A_pv, a) + diffusion_capacitance(V_d, p, a)


def fit_lifetime(V_d, C_target, p: PVParams, a: ACCellParams):
    """Carrier lifetime that makes C_T + C_d equal ``C_target`` at ``V_d``."""
    C_T = transition_capacitance(V_d, p.A_pv, a)
    if C_T >= C_target:
        raise DomainError(
            f"transition capacitance {C_T:.4g} F alone exceeds the target {C_target:.4g} F; lower N_B"
        )
    return 2 * dynamic_resistance(V_d, p) * (C_target - C_T)


def small_signal_at(op: OperatingPoint, p: PVParams, a: ACCellParams) -> CellSmallSignal:
    """Cell r and C at the operating point, honouring calibration overrides."""
    V_d = op.V_d
    C_T = transition_capacitance(V_d, p.A_pv, a)
    C_d = diffusion_capacitance(V_d, p, a)
    r = a.calibration_r if a.calibration_r is not None else dynamic_resistance(V_d, p)
    C = a.calibration_C if a.calibration_C is not None else C_T + C_d
    return CellSmallSignal(V_d=V_d, r=r, C=C, C_T=C_T, C_d=C_d, calibrated=a.calibrated)


def quasi_static_ok(f_max, a: ACCellParams, warn=True):
    """False (and a :class:`QuasiStaticWarning`) when 2*pi*f_max*tau > 0.1."""
    wt = 2 * math.pi * f_max * a.tau
    if wt > QUASI_STATIC_LIMIT:
        if warn:
            warnings.warn(
                f"omega*tau = {wt:.3g} at {f_max:.3g} Hz; diffusion capacitance is outside its quasi-static range",
                QuasiStaticWarning,
                stacklevel=2,
            )
        return False
    return True


def r_c_curve(V_grid, p: PVParams, a: ACCellParams):
    """Physical-mode r and C over a grid of cell voltages; returns (V, r, C)."""
    V_grid = np.asarray(V_grid, dtype=float)
    return V_grid, dynamic_resistance(V_grid, p), cell_capacitance(V_grid, p, a)
