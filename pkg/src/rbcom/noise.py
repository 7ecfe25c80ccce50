"""Background light, shot noise and thermal noise, referred to the output across R_C.

All PSDs are one-sided. Thermal sources default to the Norton form
4kT/R (A^2/Hz) injected in parallel with each resistor; ``convention=
"as_printed"`` multiplies the same V/A transfers by 4kTR instead, which is
dimensionally inconsistent and kept only for sensitivity comparisons.
"""

import math
from dataclasses import dataclass

import numpy as np

from .constants import k, q
from .errors import require
from .network import THERMAL_SOURCES, SmallSignalModel, mna_transfers, signal_response

CONVENTIONS = ("norton", "as_printed")


@dataclass(frozen=True)
class BackgroundParams:
    eta_Rx: float = 0.5
    H_bkg: float = 0.2
    B_IF: float = 20.0
    A_Rx: float = 1e-4
    Phi_Rx: float = 2 * math.pi * (1 - math.cos(math.radians(30)))
    Gamma: float = 0.05

    def __post_init__(self):
        for name in ("eta_Rx", "H_bkg", "B_IF", "A_Rx", "Phi_Rx", "Gamma"):
            require(getattr(self, name) >= 0, name, "must be >= 0")
        require(self.Gamma <= 1, "Gamma", "must be <= 1")
        require(self.eta_Rx <= 1, "eta_Rx", "must be <= 1")


def background_power(b: BackgroundParams):
    """Background optical power reaching the panel, W."""
    return b.eta_Rx * b.H_bkg * b.B_IF * b.A_Rx * b.Phi_Rx * b.Gamma


def background_photocurrent(b: BackgroundParams, rho):
    return rho * background_power(b)


def shot_psd_input(P_laser, P_bkg, rho):
    """White shot-noise current PSD, A^2/Hz."""
    if P_laser < 0 or P_bkg < 0:
        raise ValueError("optical powers must be >= 0")
    return 2 * q * rho * (P_laser + P_bkg)


def shot_psd_output(omega, m: SmallSignalModel, P_laser, P_bkg, rho):
    """Shot noise at the output, V^2/Hz; it shares the signal's transfer."""
    return np.abs(signal_response(omega, m)) ** 2 * shot_psd_input(P_laser, P_bkg, rho)


def thermal_source_psd(R, T, convention="norton"):
    if convention == "norton":
        return 4 * k * T / R
    if convention == "as_printed":
        return 4 * k * T * R
    raise ValueError(f"unknown thermal convention {convention!r}; expected one of {CONVENTIONS}")


def thermal_psd_terms(omega, m: SmallSignalModel, T, convention="norton"):
    """Per-resistor thermal contributions at the output, dict of V^2/Hz arrays."""
    scalar = np.ndim(omega) == 0
    h = mna_transfers(omega, m, THERMAL_SOURCES)
    terms = {}
    for src in THERMAL_SOURCES:
        t = np.abs(h[src]) ** 2 * thermal_source_psd(m.resistance(src), T, convention)
        terms[src] = float(t[0]) if scalar else t
    return terms


def thermal_psd_output(omega, m: SmallSignalModel, T, convention="norton"):
    """Total output thermal-noise PSD, V^2/Hz."""
    return sum(thermal_psd_terms(omega, m, T, convention).values())
