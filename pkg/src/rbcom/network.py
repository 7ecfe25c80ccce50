"""Small-signal frequency response of the PV cell and the CEH shunt.

Topology (ground is the cell's negative terminal)::

    A --R_s-- B --L-- C --+--L_0-- D --R_L-- gnd    (energy-harvesting branch)
    |                     |
    I_ph, r, C, R_sh      +--C_0-- E --R_C-- gnd    (communication branch)
    |
    gnd

The output is the voltage at E, i.e. across R_C. :func:`signal_response`
is the closed form; :func:`mna_transfer` solves the nodal equations
directly and serves as an independent check and as the source of the
thermal-noise transfers.
"""

import warnings
from dataclasses import dataclass, replace

import numpy as np

from .errors import AnalysisError, BandEdgeWarning, require

NODES = ("A", "B", "C", "D", "E")
OUTPUT_NODE = 4
N_UNKNOWNS = 7

# Norton injection points: (from node, to node); None is ground
SOURCES = {
    "photocurrent": (None, 0),
    "r": (None, 0),
    "R_sh": (None, 0),
    "R_s": (1, 0),
    "R_L": (None, 3),
    "R_C": (None, 4),
}
THERMAL_SOURCES = ("R_C", "R_sh", "R_L", "r", "R_s")


@dataclass(frozen=True)
class SmallSignalModel:
    r: float = 839.5
    C: float = 26.6e-9
    R_sh: float = 5000.0
    R_s: float = 1.3
    L: float = 120e-9
    L_0: float = 40e-3
    C_0: float = 6e-12
    R_C: float = 300.0
    R_L: float = 0.6

    def __post_init__(self):
        for name in ("r", "R_sh", "R_s", "R_C", "R_L"):
            require(getattr(self, name) > 0, name, "resistance must be > 0")
        for name in ("C", "L", "L_0", "C_0"):
            require(getattr(self, name) > 0, name, "must be > 0")

    def with_(self, **changes):
        return replace(self, **changes)

    def resistance(self, source):
        return getattr(self, source)


@dataclass(frozen=True)
class SpectrumGrid:
    frequencies: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        f = np.asarray(self.frequencies, dtype=float)
        v = np.asarray(self.values)
        require(f.ndim == 1 and f.shape == v.shape, "values", "must match the frequency grid")
        require(np.all(f > 0), "frequencies", "must be > 0")
        require(np.all(np.diff(f) > 0), "frequencies", "must be strictly increasing")
        object.__setattr__(self, "frequencies", f)
        object.__setattr__(self, "values", v)

    def power(self):
        """|values|^2 as a new grid (for complex transfers)."""
        return SpectrumGrid(self.frequencies, np.abs(self.values) ** 2)

    def at(self, f):
        """Values at ``f`` by linear interpolation in log-frequency."""
        f = np.asarray(f, dtype=float)
        lo, hi = self.frequencies[0], self.frequencies[-1]
        if np.any((f < lo) | (f > hi)):
            raise AnalysisError(f"frequency outside the computed grid [{lo:.4g}, {hi:.4g}] Hz")
        x = np.log(self.frequencies)
        if np.iscomplexobj(self.values):
            return np.interp(np.log(f), x, self.values.real) + 1j * np.interp(np.log(f), x, self.values.imag)
        return np.interp(np.log(f), x, self.values)


def log_grid(f_min=1e3, f_max=3e9, n=2000):
    return np.logspace(np.log10(f_min), np.log10(f_max), n)


def branch_impedance_zlc(omega, m: SmallSignalModel):
    """Energy-harvesting branch in parallel with the communication branch."""
    jw = 1j * np.asarray(omega, dtype=float)
    z_eh = jw * m.L_0 + m.R_L
    z_comm = 1 / (jw * m.C_0) + m.R_C
    return z_eh * z_comm / (z_eh + z_comm)


def signal_response(omega, m: SmallSignalModel):
    """Photocurrent-to-output transfer H_ph in V/A."""
    jw = 1j * np.asarray(omega, dtype=float)
    z_lc = branch_impedance_zlc(omega, m)
    z_series = m.R_s + jw * m.L + z_lc
    divider = (z_lc / z_series) * (m.R_C / (1 / (jw * m.C_0) + m.R_C))
    admittance = 1 / m.r + jw * m.C + 1 / m.R_sh + 1 / z_series
    return divider / admittance


def mna_matrix(omega, m: SmallSignalModel):
    """Modified nodal matrices, shape (len(omega), 7, 7).

    Unknowns are the five node voltages followed by the currents through L
    and L_0. Carrying inductor currents explicitly keeps the system well
    conditioned at low frequency, where 1/(jwL) would otherwise dominate.
    """
    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    jw = 1j * omega
    Y = np.zeros((omega.size, N_UNKNOWNS, N_UNKNOWNS), dtype=complex)

    def stamp(a, b, y):
        y = np.broadcast_to(y, omega.shape)
        if a is not None:
            Y[:, a, a] += y
        if b is not None:
            Y[:, b, b] += y
        if a is not None and b is not None:
            Y[:, a, b] -= y
            Y[:, b, a] -= y

    def inductor(a, b, row, value):
        # KCL: current I flows a -> b; branch: V_a - V_b - jwL I = 0
        Y[:, a, row] += 1
        Y[:, b, row] -= 1
        Y[:, row, a] += 1
        Y[:, row, b] -= 1
        Y[:, row, row] -= jw * value

    stamp(0, None, 1 / m.r)
    stamp(0, None, jw * m.C)
    stamp(0, None, 1 / m.R_sh)
    stamp(0, 1, 1 / m.R_s)
    inductor(1, 2, 5, m.L)
    inductor(2, 3, 6, m.L_0)
    stamp(3, None, 1 / m.R_L)
    stamp(2, 4, jw * m.C_0)
    stamp(4, None, 1 / m.R_C)
    return Y


def mna_transfer(omega, m: SmallSignalModel, source="photocurrent"):
    """Output voltage per ampere injected by ``source``, by direct nodal solve.

    Thermal sources are Norton current sources in parallel with their
    resistor, so every transfer is in V/A.
    """
    out = mna_transfers(omega, m, (source,))[source]
    return out[0] if np.ndim(omega) == 0 else out


def mna_transfers(omega, m: SmallSignalModel, sources=tuple(SOURCES)):
    """Like :func:`mna_transfer` for several sources with one factorisation per frequency."""
    for s in sources:
        if s not in SOURCES:
            raise ValueError(f"unknown source {s!r}; expected one of {sorted(SOURCES)}")
    Y = mna_matrix(omega, m)
    rhs = np.zeros((Y.shape[0], N_UNKNOWNS, len(sources)), dtype=complex)
    for col, s in enumerate(sources):
        frm, to = SOURCES[s]
        if to is not None:
            rhs[:, to, col] += 1.0
        if frm is not None:
            rhs[:, frm, col] -= 1.0
    v = np.linalg.solve(Y, rhs)[:, OUTPUT_NODE, :]
    assert np.all(np.isfinite(v)), "singular nodal matrix"
    return {s: v[:, col] for col, s in enumerate(sources)}


def two_terminal_impedance(omega, m: SmallSignalModel):
    """Impedance looking into node C with the cell side open (nodal solve)."""
    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    # sub-network {C, D, E, I_L0}: drop the A/B nodes and the L branch
    keep = [2, 3, 4, 6]
    Y = mna_matrix(omega, m)[:, keep][:, :, keep]
    rhs = np.zeros((omega.size, 4, 1), dtype=complex)
    rhs[:, 0, 0] = 1.0
    return np.linalg.solve(Y, rhs)[:, 0, 0]


def transfer_grid(f, m: SmallSignalModel, source="photocurrent"):
    f = np.asarray(f, dtype=float)
    w = 2 * np.pi * f
    h = signal_response(w, m) if source == "photocurrent" else mna_transfer(w, m, source)
    return SpectrumGrid(f, h)


def bandwidth_3db(grid: SpectrumGrid):
    """Width in Hz of the contiguous half-power region around the peak of |H|^2.

    Edges are located by interpolating in log-frequency between grid points.
    If the region runs into the end of the grid, that end is used and a
    :class:`BandEdgeWarning` is issued.
    """
    f = grid.frequencies
    p = np.abs(grid.values) ** 2 if np.iscomplexobj(grid.values) else np.asarray(grid.values, dtype=float)
    if p.size < 3 or not np.any(p > 0):
        raise AnalysisError("no passband found")
    k = int(np.argmax(p))
    half = p[k] / 2
    above = p >= half
    lo = k
    while lo > 0 and above[lo - 1]:
        lo -= 1
    hi = k
    while hi < p.size - 1 and above[hi + 1]:
        hi += 1
    if lo == 0 and hi == p.size - 1:
        raise AnalysisError("no passband found: response never falls by 3 dB inside the grid")

    def crossing(i, j):
        # half-power crossing between grid points i (outside) and j (inside)
        x = np.log([f[i], f[j]])
        t = (half - p[i]) / (p[j] - p[i])
        return float(np.exp(x[0] + t * (x[1] - x[0])))

    if lo == 0:
        warnings.warn("lower half-power edge not resolved in the grid", BandEdgeWarning, stacklevel=2)
        f_lo = f[0]
    else:
        f_lo = crossing(lo - 1, lo)
    if hi == p.size - 1:
        warnings.warn("upper half-power edge not resolved in the grid", BandEdgeWarning, stacklevel=2)
        f_hi = f[-1]
    else:
        f_hi = crossing(hi + 1, hi)
    return f_hi - f_lo
