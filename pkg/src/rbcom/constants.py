"""Physical constants shared by every module (CODATA 2018 exact values)."""

from scipy import constants as _sc

h = _sc.h  # J s
c = _sc.c  # m / s
q = _sc.e  # C
k = _sc.k  # J / K
epsilon_0 = _sc.epsilon_0  # F / m

# exp() arguments above this are rejected instead of overflowing
MAX_EXPONENT = 700.0


def thermal_voltage(T):
    """kT/q in volts."""
    return k * T / q


def photon_voltage(wavelength):
    """hc/(q*lambda): photon energy in eV, i.e. watts per ampere of photon flux."""
    return h * c / (q * wavelength)
