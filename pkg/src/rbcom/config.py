"""System configuration: one JSON document with a section per model block.

The defaults reproduce the nominal parameter table (L = 120 nH case).
:data:`CASES` holds the two named wire-inductance cases; the shipped preset
files ``tableI-L120.json`` and ``tableI-L10.json`` are these defaults with
the case applied.
"""

import dataclasses
import hashlib
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional

from .cavity import CavityParams
from .errors import ConfigError, require
from .link import OFDMConfig
from .noise import CONVENTIONS, BackgroundParams
from .pump import PumpParams
from .pv_ac import ACCellParams
from .pv_dc import PVParams

ANALYSES = (
    "iv-curve",
    "operating-point",
    "small-signal",
    "freq-response",
    "noise",
    "snr-capacity",
    "power-sweep",
    "distance-sweep",
    "monte-carlo",
)

CASES = {
    "L120": {"network": {"L": 120e-9, "R_C": 300.0}, "ofdm": {"N": 120}},
    "L10": {"network": {"L": 10e-9, "R_C": 140.0}, "ofdm": {"N": 200}},
}

PRESETS = {"L120": "tableI-L120.json", "L10": "tableI-L10.json"}


@dataclass(frozen=True)
class NetworkParams:
    """CEH shunt and wiring; R_L is also the DC load."""

    L: float = 120e-9
    L_0: float = 40e-3
    C_0: float = 6e-12
    R_C: float = 300.0
    R_L: float = 0.6

    def __post_init__(self):
        for name in ("L", "L_0", "C_0", "R_C", "R_L"):
            require(getattr(self, name) > 0, name, "must be > 0")


@dataclass(frozen=True)
class RunParams:
    analysis: str = "snr-capacity"
    P_laser: float = 0.2
    distance: Optional[float] = None
    seed: int = 0
    thermal_convention: str = "norton"
    # frequency grid for spectra
    f_min: float = 1e3
    f_max: float = 3e9
    n_freq: int = 2000
    # DC sweeps
    I_ph_max: float = 0.5
    n_I_ph: int = 101
    iv_photocurrents: tuple = (0.05, 0.1, 0.1492, 0.2, 0.3, 0.4)
    n_V: int = 201
    # power-capacity trade-off
    P_laser_min: float = 0.05
    P_laser_max: float = 0.6
    n_P_laser: int = 12
    # distance sweep (uses the physical f(d))
    d_min: float = 0.1
    d_max: float = 100.0
    n_d: int = 61
    # Monte-Carlo oracle
    mc_samples: int = 2**20
    mc_segments: int = 64
    mc_oversample: float = 4.0

    def __post_init__(self):
        object.__setattr__(self, "iv_photocurrents", tuple(self.iv_photocurrents))
        require(self.analysis in ANALYSES, "analysis", f"must be one of {', '.join(ANALYSES)}")
        require(self.thermal_convention in CONVENTIONS, "thermal_convention", f"must be one of {CONVENTIONS}")
        require(self.P_laser > 0, "P_laser", "must be > 0")
        if self.distance is not None:
            require(self.distance > 0, "distance", "must be > 0 when set")
        require(0 < self.f_min < self.f_max, "f_min", "need 0 < f_min < f_max")
        require(self.n_freq >= 3, "n_freq", "must be >= 3")
        require(self.I_ph_max > 0, "I_ph_max", "must be > 0")
        require(self.n_I_ph >= 2, "n_I_ph", "must be >= 2")
        require(all(i > 0 for i in self.iv_photocurrents), "iv_photocurrents", "must be > 0")
        require(self.n_V >= 2, "n_V", "must be >= 2")
        require(0 < self.P_laser_min <= self.P_laser_max, "P_laser_min", "need 0 < P_laser_min <= P_laser_max")
        require(self.n_P_laser >= 1, "n_P_laser", "must be >= 1")
        require(0 < self.d_min < self.d_max, "d_min", "need 0 < d_min < d_max")
        require(self.n_d >= 2, "n_d", "must be >= 2")
        require(self.mc_samples >= 2 and self.mc_segments >= 1, "mc_samples", "must be >= 2")
        require(self.mc_oversample > 2, "mc_oversample", "must exceed 2 (Nyquist)")


SECTIONS = {
    "pump": PumpParams,
    "cavity": CavityParams,
    "pv": PVParams,
    "ac_cell": ACCellParams,
    "network": NetworkParams,
    "background": BackgroundParams,
    "ofdm": OFDMConfig,
    "run": RunParams,
}


@dataclass(frozen=True)
class SystemConfig:
    pump: PumpParams = field(default_factory=PumpParams)
    cavity: CavityParams = field(default_factory=CavityParams)
    pv: PVParams = field(default_factory=PVParams)
    ac_cell: ACCellParams = field(default_factory=ACCellParams)
    network: NetworkParams = field(default_factory=NetworkParams)
    background: BackgroundParams = field(default_factory=BackgroundParams)
    ofdm: OFDMConfig = field(default_factory=OFDMConfig)
    run: RunParams = field(default_factory=RunParams)
    description: str = ""

    def to_dict(self):
        out = {"description": self.description}
        for name in SECTIONS:
            section = dataclasses.asdict(getattr(self, name))
            out[name] = {k: list(v) if isinstance(v, tuple) else v for k, v in section.items()}
        return out

    def replace(self, **sections):
        """Copy with whole sections or ``{section: {field: value}}`` overrides."""
        return from_dict(sections, base=self)

    def with_case(self, case):
        if case not in CASES:
            raise ConfigError(f"unknown case {case!r}; expected one of {sorted(CASES)}", field="case")
        return from_dict(CASES[case], base=self)


def _check_value(section, name, value, default):
    path = f"{section}.{name}"
    if isinstance(default, bool) or isinstance(value, bool):
        return value
    if isinstance(default, int) and not isinstance(default, bool):
        if isinstance(value, float) and value.is_integer():
            return int(value)
        require(isinstance(value, int), path, "must be an integer")
    elif isinstance(default, float) or (default is None and value is not None):
        require(isinstance(value, (int, float)), path, "must be a number")
        return float(value)
    elif isinstance(default, str):
        require(isinstance(value, str), path, "must be a string")
    elif isinstance(default, tuple):
        require(isinstance(value, (list, tuple)), path, "must be a list")
        require(all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value), path, "must hold numbers")
        return tuple(float(v) for v in value)
    return value


def _build_section(name, cls, overrides, base):
    if not isinstance(overrides, dict):
        raise ConfigError("section must be a JSON object", field=name)
    known = {f.name: f for f in dataclasses.fields(cls)}
    unknown = sorted(set(overrides) - set(known))
    if unknown:
        raise ConfigError(f"unknown key(s) {', '.join(unknown)}", field=name)
    values = dataclasses.asdict(base)
    defaults = cls()
    for key, value in overrides.items():
        if value is None:
            optional = type(None) in getattr(known[key].type, "__args__", ())
            require(optional, f"{name}.{key}", "may not be null")
            values[key] = None
        else:
            values[key] = _check_value(name, key, value, getattr(defaults, key))
    try:
        return cls(**values)
    except ConfigError as exc:
        raise ConfigError(exc.reason, field=f"{name}.{exc.field}" if exc.field else name) from None


def from_dict(data, base=None) -> SystemConfig:
    """Validated config from a (possibly partial) mapping merged onto ``base``."""
    base = base or SystemConfig()
    if not isinstance(data, dict):
        raise ConfigError("top level must be a JSON object")
    unknown = sorted(set(data) - set(SECTIONS) - {"description"})
    if unknown:
        raise ConfigError(f"unknown top-level key(s) {', '.join(unknown)}")
    kwargs = {}
    for name, cls in SECTIONS.items():
        current = getattr(base, name)
        if name not in data:
            kwargs[name] = current
        elif isinstance(data[name], cls):
            kwargs[name] = data[name]
        else:
            kwargs[name] = _build_section(name, cls, data[name], current)
    desc = data.get("description", base.description)
    require(isinstance(desc, str), "description", "must be a string")
    return SystemConfig(description=desc, **kwargs)


def loads(text, source="<string>") -> SystemConfig:
    if not text.strip():
        raise ConfigError(f"{source}: empty configuration")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{source}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from None
    return from_dict(data)


def load_config(path) -> SystemConfig:
    """Read, merge onto the defaults and validate a JSON configuration file."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    return loads(text, str(path))


def dumps(cfg: SystemConfig) -> str:
    return json.dumps(cfg.to_dict(), indent=2) + "\n"


def write_config(cfg: SystemConfig, path):
    Path(path).write_text(dumps(cfg))


def config_hash(cfg: SystemConfig) -> str:
    canonical = json.dumps(cfg.to_dict(), sort_keys=True, separators=(",", ":"), allow_nan=False)
    return hashlib.sha256(canonical.encode()).hexdigest()


def preset(case="L120") -> SystemConfig:
    """Load one of the shipped preset files."""
    if case not in PRESETS:
        raise ConfigError(f"unknown case {case!r}; expected one of {sorted(PRESETS)}", field="case")
    text = resources.files("rbcom.presets").joinpath(PRESETS[case]).read_text()
    return loads(text, PRESETS[case])


def default_config(case="L120") -> SystemConfig:
    """Built-in defaults with ``case`` applied (equal to the preset file)."""
    cfg = SystemConfig(description=f"nominal parameter table, case {case}")
    return cfg.with_case(case)

