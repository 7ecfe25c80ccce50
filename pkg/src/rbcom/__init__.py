"""Resonant-beam SWIPT link simulator.

Pump LD -> resonant cavity -> PV receiver DC operating point -> small-signal
network -> shot/thermal noise -> OFDM SNR and capacity.
"""

__version__ = "0.1.0"

from .cavity import CavityParams, distance_gain, end_to_end_gain, laser_power
from .config import SystemConfig, default_config, load_config, preset, write_config
from .link import OFDMConfig, evaluate_link, monte_carlo_snr, power_capacity_sweep, total_capacity
from .network import SmallSignalModel, SpectrumGrid, bandwidth_3db, mna_transfer, signal_response
from .noise import BackgroundParams, background_power, shot_psd_input, thermal_psd_output
from .pump import DriveSignal, PumpParams, drive_current, pump_power, signal_variance
from .pv_ac import ACCellParams, diffusion_capacitance, dynamic_resistance, transition_capacitance
from .pv_dc import OperatingPoint, PVParams, diode_current, photocurrent, solve_operating_point

__all__ = [
    "CavityParams",
    "distance_gain",
    "end_to_end_gain",
    "laser_power",
    "SystemConfig",
    "default_config",
    "load_config",
    "preset",
    "write_config",
    "OFDMConfig",
    "evaluate_link",
    "monte_carlo_snr",
    "power_capacity_sweep",
    "total_capacity",
    "SmallSignalModel",
    "SpectrumGrid",
    "bandwidth_3db",
    "mna_transfer",
    "signal_response",
    "BackgroundParams",
    "background_power",
    "shot_psd_input",
    "thermal_psd_output",
    "DriveSignal",
    "PumpParams",
    "drive_current",
    "pump_power",
    "signal_variance",
    "ACCellParams",
    "diffusion_capacitance",
    "dynamic_resistance",
    "transition_capacitance",
    "OperatingPoint",
    "PVParams",
    "diode_current",
    "photocurrent",
    "solve_operating_point",
]
