"""Resonant cavity: pump power to coupled output laser, and end-to-end gain."""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .constants import photon_voltage
from .errors import DomainError, require
from .pump import PumpParams, pump_power


@dataclass(frozen=True)
class CavityParams:
    """Long-cavity laser parameters.

    When ``eta_d_override`` is set it replaces the distance gain f(d) and
    the distance argument is ignored.
    """

    eta_s: float = 0.423
    R: float = 0.95
    p: float = 1.0
    a: float = 1.5e-3
    lambda_beam: float = 1064e-9
    C_offset: float = 0.0
    eta_d_override: Optional[float] = 0.054 / 0.423

    def __post_init__(self):
        require(self.eta_s > 0, "eta_s", "must be > 0")
        require(0 < self.R < 1, "R", "must lie in (0, 1)")
        require(0 <= self.p <= 1, "p", "must lie in [0, 1]")
        require(self.a > 0, "a", "must be > 0")
        require(self.lambda_beam > 0, "lambda_beam", "must be > 0")
        if self.eta_d_override is not None:
            require(self.eta_d_override > 0, "eta_d_override", "must be > 0 when set")


def distance_gain(d, c: CavityParams):
    """Distance-dependent transfer f(d) of the cavity (diffraction limited)."""
    d = np.asarray(d, dtype=float)
    if np.any(d <= 0):
        raise DomainError("distance must be > 0")
    one_r = 1 + c.R
    diffraction = np.exp(-2 * np.pi * c.a**2 / (c.lambda_beam * d))
    out = 2 * (1 - c.R) * c.p / (one_r * diffraction - one_r * math.log(c.R))
    return float(out) if out.ndim == 0 else out


def distance_gain_limits(c: CavityParams):
    """(near, far) limits of f(d) as d -> 0+ and d -> infinity."""
    num = 2 * (1 - c.R) * c.p
    one_r = 1 + c.R
    return num / (-one_r * math.log(c.R)), num / (one_r * (1 - math.log(c.R)))


def attenuation(d, c: CavityParams):
    if c.eta_d_override is not None:
        return c.eta_d_override
    return distance_gain(d, c)


def laser_power(P_pump, d, c: CavityParams):
    """Output laser power behind the receiver mirror, W."""
    P_pump = np.asarray(P_pump, dtype=float)
    if np.any(P_pump < 0):
        raise DomainError("pump power must be >= 0")
    out = c.eta_s * P_pump * attenuation(d, c) + c.C_offset
    return float(out) if np.ndim(out) == 0 else out


def end_to_end_gain(pump: PumpParams, cav: CavityParams, rho, d=None):
    """Linear coefficients (gamma, beta) with I_ph = gamma*(I_in - I_th) + beta.

    ``d`` may be omitted when the cavity carries a fixed attenuation.
    """
    if d is None and cav.eta_d_override is None:
        raise DomainError("distance is required when no fixed attenuation is configured")
    eta_d = attenuation(d, cav)
    gamma = rho * cav.eta_s * eta_d * pump.eta_e * photon_voltage(pump.lambda_pump)
    return float(gamma), float(rho * cav.C_offset)


def chain_photocurrent(I_in, pump: PumpParams, cav: CavityParams, rho, d=None):
    """Photocurrent by composing pump -> cavity -> responsivity step by step."""
    return rho * laser_power(pump_power(I_in, pump), d, cav)


def drive_for_laser_power(P_laser, pump: PumpParams, cav: CavityParams, d=None):
    """Pump drive current that produces ``P_laser`` at the receiver."""
    per_amp = cav.eta_s * attenuation(d, cav) * pump.slope
    return pump.I_th + (P_laser - cav.C_offset) / per_amp
