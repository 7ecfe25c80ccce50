"""Pump laser diode: drive current to optical power, and the biased OFDM drive."""

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .constants import photon_voltage
from .errors import BelowThresholdWarning, DomainError, ModulationWarning, require


@dataclass(frozen=True)
class PumpParams:
    """Pump LD parameters.

    ``eta_e`` already includes the injection efficiency and the photon
    extraction ratio.
    """

    lambda_pump: float = 808e-9
    eta_e: float = 0.9
    I_th: float = 0.5

    def __post_init__(self):
        require(self.lambda_pump > 0, "lambda_pump", "must be > 0")
        require(0 < self.eta_e <= 1, "eta_e", "must lie in (0, 1]")
        require(self.I_th >= 0, "I_th", "must be >= 0")

    @property
    def slope(self):
        """Slope efficiency above threshold, W/A."""
        return photon_voltage(self.lambda_pump) * self.eta_e


@dataclass(frozen=True)
class Subcarrier:
    amplitude: float
    frequency: float
    phase: float = 0.0


@dataclass(frozen=True)
class DriveSignal:
    I_bias: float
    subcarriers: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "subcarriers", tuple(self.subcarriers))
        freqs = [s.frequency for s in self.subcarriers]
        require(all(s.amplitude >= 0 for s in self.subcarriers), "subcarriers", "amplitudes must be >= 0")
        require(all(b > a for a, b in zip(freqs, freqs[1:])), "subcarriers", "frequencies must be strictly increasing")

    @property
    def N(self):
        return len(self.subcarriers)

    @property
    def amplitudes(self):
        return np.array([s.amplitude for s in self.subcarriers], dtype=float)

    @property
    def frequencies(self):
        return np.array([s.frequency for s in self.subcarriers], dtype=float)

    @property
    def phases(self):
        return np.array([s.phase for s in self.subcarriers], dtype=float)

    @classmethod
    def equal_power(cls, I_bias, sigma_s2, frequencies, phases=None):
        """N equal-amplitude tones whose total variance is ``sigma_s2``."""
        frequencies = np.asarray(frequencies, dtype=float)
        n = len(frequencies)
        if phases is None:
            phases = np.zeros(n)
        amp = math.sqrt(2.0 * sigma_s2 / n) if n else 0.0
        return cls(I_bias, tuple(Subcarrier(amp, float(f), float(p)) for f, p in zip(frequencies, phases)))


def pump_power(I_in, p: PumpParams):
    """Optical output power of the pump LD in watts.

    Linear above threshold. Below threshold the power is clamped to zero
    and a :class:`BelowThresholdWarning` is issued; use
    :func:`below_threshold` to get the flag explicitly.
    """
    I_in = np.asarray(I_in, dtype=float)
    if np.any(I_in < 0):
        raise DomainError("drive current must be >= 0")
    excess = I_in - p.I_th
    below = excess < 0
    if np.any(below):
        warnings.warn("drive current below threshold; pump power clamped to 0", BelowThresholdWarning, stacklevel=2)
    out = np.where(below, 0.0, p.slope * excess)
    return float(out) if out.ndim == 0 else out


def below_threshold(I_in, p: PumpParams):
    return np.asarray(I_in) < p.I_th


def drive_current(t, s: DriveSignal):
    """I_bias plus the sum of cosine subcarriers, evaluated at times ``t``."""
    t = np.asarray(t, dtype=float)
    if not s.N:
        return s.I_bias + np.zeros_like(t) if t.ndim else float(s.I_bias)
    arg = 2 * np.pi * np.multiply.outer(t, s.frequencies) + s.phases
    out = s.I_bias + np.cos(arg) @ s.amplitudes
    return float(out) if np.ndim(out) == 0 else out


def signal_variance(s: DriveSignal):
    """Time-averaged variance of the AC part: sum of B_i^2 / 2."""
    if not s.N:
        return 0.0
    return float(np.sum(s.amplitudes**2) / 2)


def check_modulation(s: DriveSignal, p: PumpParams):
    """Return True if the drive never dips below threshold (warns otherwise)."""
    trough = s.I_bias - float(np.sum(s.amplitudes)) if s.N else s.I_bias
    if trough < p.I_th:
        warnings.warn(
            f"worst-case drive {trough:.4g} A is below threshold {p.I_th:.4g} A; modulation clips",
            ModulationWarning,
            stacklevel=2,
        )
        return False
    return True
