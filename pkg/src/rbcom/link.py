"""OFDM link budget: per-subchannel SNR, Shannon capacity, charging power.

The pipeline functions take a system configuration (see
:class:`rbcom.config.SystemConfig`) and run it end to end: photocurrent,
DC operating point, small-signal cell, network spectra, noise, SNR.
"""

import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import signal as sps

from .cavity import drive_for_laser_power, end_to_end_gain
from .errors import ConfigError, require
from .network import (
    THERMAL_SOURCES,
    SmallSignalModel,
    SpectrumGrid,
    log_grid,
    mna_transfers,
    signal_response,
)
from .noise import background_power, shot_psd_input, thermal_source_psd
from .pump import DriveSignal, check_modulation
from .pv_ac import quasi_static_ok, small_signal_at
from .pv_dc import photocurrent, solve_operating_point


@dataclass(frozen=True)
class OFDMConfig:
    N: int = 120
    w: float = 1e6
    sigma_s2: float = 0.01
    band_start: float = 0.0

    def __post_init__(self):
        require(isinstance(self.N, int) and self.N >= 1, "N", "must be an integer >= 1")
        require(self.w > 0, "w", "must be > 0")
        require(self.sigma_s2 > 0, "sigma_s2", "must be > 0")
        require(self.band_start >= 0, "band_start", "must be >= 0")

    @property
    def centers(self):
        return self.band_start + (np.arange(self.N) + 0.5) * self.w

    @property
    def band_edge(self):
        return self.band_start + self.N * self.w


@dataclass(frozen=True)
class LinkSpectra:
    """Signal transfer and output noise PSDs on one frequency grid."""

    h_ph: SpectrumGrid
    shot: SpectrumGrid
    thermal: SpectrumGrid
    thermal_terms: dict = field(default_factory=dict)

    @property
    def frequencies(self):
        return self.h_ph.frequencies

    @property
    def noise(self):
        return SpectrumGrid(self.frequencies, self.shot.values + self.thermal.values)


@dataclass
class LinkReport:
    frequencies: np.ndarray
    snr: np.ndarray
    capacity: np.ndarray
    total_capacity: float
    P_chg: float
    P_laser: float
    gamma: float
    operating_point: object
    model: SmallSignalModel
    spectra: LinkSpectra = None
    warnings: list = field(default_factory=list)

    def summary(self):
        return {
            "gamma": self.gamma,
            "P_laser_W": self.P_laser,
            "P_chg_W": self.P_chg,
            "total_capacity_bps": self.total_capacity,
            "r_ohm": self.model.r,
            "C_F": self.model.C,
            **self.operating_point.as_dict(),
        }


@dataclass(frozen=True)
class SweepPoint:
    P_laser: float
    P_chg: float
    capacity: float


def compute_spectra(f, m: SmallSignalModel, P_laser, P_bkg, rho, T, convention="norton"):
    """Signal transfer, shot and thermal output PSDs on the frequency grid ``f``."""
    f = np.asarray(f, dtype=float)
    w = 2 * np.pi * f
    h = signal_response(w, m)
    shot = np.abs(h) ** 2 * shot_psd_input(P_laser, P_bkg, rho)
    trans = mna_transfers(w, m, THERMAL_SOURCES)
    terms = {
        s: np.abs(trans[s]) ** 2 * thermal_source_psd(m.resistance(s), T, convention) for s in THERMAL_SOURCES
    }
    thermal = sum(terms.values())
    return LinkSpectra(SpectrumGrid(f, h), SpectrumGrid(f, shot), SpectrumGrid(f, thermal), terms)


def subchannel_snrs(cfg: OFDMConfig, gamma, h_ph: SpectrumGrid, noise: SpectrumGrid):
    """SNR of every subchannel, with spectra interpolated at the centres."""
    fc = cfg.centers
    h2 = np.abs(h_ph.at(fc)) ** 2
    n0 = np.asarray(noise.at(fc), dtype=float)
    return gamma**2 * (cfg.sigma_s2 / cfg.N) * h2 / (cfg.w * n0)


def subchannel_snr(i, cfg: OFDMConfig, gamma, h_ph: SpectrumGrid, noise: SpectrumGrid):
    if not 0 <= i < cfg.N:
        raise IndexError(f"subchannel {i} outside 0..{cfg.N - 1}")
    fc = cfg.band_start + (i + 0.5) * cfg.w
    h2 = abs(complex(h_ph.at(fc))) ** 2
    n0 = float(noise.at(fc))
    return gamma**2 * (cfg.sigma_s2 / cfg.N) * h2 / (cfg.w * n0)


def subchannel_capacity(cfg: OFDMConfig, snr):
    return cfg.w * np.log2(1 + np.asarray(snr, dtype=float))


def total_capacity(cfg: OFDMConfig, snr):
    """Sum of Shannon capacities over the subchannels, bit/s."""
    return float(np.sum(subchannel_capacity(cfg, snr)))


def build_model(system, op):
    """Small-signal network at operating point ``op``."""
    cell = small_signal_at(op, system.pv, system.ac_cell)
    net = system.network
    return SmallSignalModel(
        r=cell.r,
        C=cell.C,
        R_sh=system.pv.R_sh,
        R_s=system.pv.R_s,
        L=net.L,
        L_0=net.L_0,
        C_0=net.C_0,
        R_C=net.R_C,
        R_L=net.R_L,
    )


def system_gamma(system):
    return end_to_end_gain(system.pump, system.cavity, system.pv.rho, system.run.distance)[0]


def frequency_grid(system):
    run = system.run
    return log_grid(run.f_min, run.f_max, run.n_freq)


def evaluate_link(system, P_laser=None, keep_spectra=True, collect_warnings=True) -> LinkReport:
    """Run the whole chain for one received laser power (default ``run.P_laser``).

    Model warnings (modulation clipping, quasi-static violation) are recorded
    on the report. Pass ``collect_warnings=False`` from worker threads, where
    :func:`warnings.catch_warnings` is not safe; they are then emitted normally.
    """
    if not collect_warnings:
        return _evaluate_link(system, P_laser, keep_spectra)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        report = _evaluate_link(system, P_laser, keep_spectra)
    report.warnings = sorted({str(w.message) for w in caught})
    return report


def _evaluate_link(system, P_laser, keep_spectra):
    if P_laser is None:
        P_laser = system.run.P_laser
    pv, ofdm, run = system.pv, system.ofdm, system.run
    gamma = system_gamma(system)
    I_bias = drive_for_laser_power(P_laser, system.pump, system.cavity, run.distance)
    check_modulation(DriveSignal.equal_power(I_bias, ofdm.sigma_s2, ofdm.centers), system.pump)
    I_ph = photocurrent(P_laser, pv)
    op = solve_operating_point(I_ph, system.network.R_L, pv)
    model = build_model(system, op)
    if system.ac_cell.calibration_C is None:
        quasi_static_ok(ofdm.band_edge, system.ac_cell)
    P_bkg = background_power(system.background)
    spectra = compute_spectra(frequency_grid(system), model, P_laser, P_bkg, pv.rho, pv.T, run.thermal_convention)
    snr = subchannel_snrs(ofdm, gamma, spectra.h_ph, spectra.noise)
    cap = subchannel_capacity(ofdm, snr)
    return LinkReport(
        frequencies=ofdm.centers,
        snr=snr,
        capacity=cap,
        total_capacity=float(np.sum(cap)),
        P_chg=op.P_chg,
        P_laser=P_laser,
        gamma=gamma,
        operating_point=op,
        model=model,
        spectra=spectra if keep_spectra else None,
    )


def worker_count(default=None):
    """Sweep parallelism, capped by the RBCOM_THREADS environment variable."""
    n = default or os.cpu_count() or 1
    cap = os.environ.get("RBCOM_THREADS")
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            raise ConfigError(f"RBCOM_THREADS must be an integer, got {cap!r}") from None
    return n


def power_capacity_sweep(P_laser_grid, system, workers=None):
    """Charging power and total capacity for each received laser power."""
    grid = [float(p) for p in P_laser_grid]
    if any(p <= 0 for p in grid):
        raise ConfigError("laser power grid must be positive", field="run.P_laser_grid")

    def one(P):
        rep = evaluate_link(system, P, keep_spectra=False, collect_warnings=False)
        return SweepPoint(P, rep.P_chg, rep.total_capacity)

    n = min(worker_count(workers), len(grid)) or 1
    if n == 1:
        return [one(p) for p in grid]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(one, grid))


@dataclass
class MonteCarloResult:
    frequencies: np.ndarray
    snr: np.ndarray
    snr_analytic: np.ndarray
    signal_power: np.ndarray
    noise_power: np.ndarray
    sample_rate: float
    n_samples: int


def _mc_sample_rate(cfg: OFDMConfig, nperseg, oversample):
    # tone spacing must be a whole number of Welch bins
    m = int(np.floor(0.5 * cfg.w * nperseg / (oversample * cfg.band_edge)))
    if m < 1:
        raise ConfigError("record too short to resolve the subchannels; raise run.mc_samples")
    return 0.5 * cfg.w / m * nperseg


def monte_carlo_snr(
    system,
    seed=0,
    n_samples=None,
    n_segments=None,
    sample_rate=None,
    P_laser=None,
    noise=True,
) -> MonteCarloResult:
    """Empirical per-subchannel SNR from a simulated received waveform.

    The OFDM drive (equal-power tones at the subchannel centres, random
    phases) and white shot/thermal current sources are filtered through
    their network transfers by FFT multiplication. The received voltage is
    split into ``n_segments`` Hann-windowed periodograms; in each subchannel
    the noise floor is the mean PSD of the bins away from the tone and the
    signal is the band power above that floor.

    With ``noise=False`` no noise is injected and the SNR is reported as
    ``inf``; ``noise_power`` is then zero and ``signal_power`` still holds
    the measured tone power.
    """
    run, cfg, pv = system.run, system.ofdm, system.pv
    n_samples = int(n_samples or run.mc_samples)
    n_segments = int(n_segments or run.mc_segments)
    if P_laser is None:
        P_laser = run.P_laser
    if n_samples % n_segments:
        raise ConfigError("mc_samples must be a multiple of mc_segments", field="run.mc_samples")
    nperseg = n_samples // n_segments
    fs = float(sample_rate) if sample_rate else _mc_sample_rate(cfg, nperseg, run.mc_oversample)
    if fs <= 2 * cfg.band_edge:
        raise ConfigError(f"sample rate {fs:.4g} Hz aliases the band edge {cfg.band_edge:.4g} Hz", field="run")
    df = fs / nperseg
    tone_bins = cfg.centers / df
    if not np.allclose(tone_bins, np.round(tone_bins), rtol=0, atol=1e-9):
        raise ConfigError("subchannel centres do not fall on periodogram bins at this sample rate", field="run")
    tone_bins = np.round(tone_bins).astype(int)

    report = evaluate_link(system, P_laser)
    gamma, model = report.gamma, report.model
    rng = np.random.default_rng(seed)

    phases = rng.uniform(0, 2 * np.pi, cfg.N)
    drive = DriveSignal.equal_power(0.0, cfg.sigma_s2, cfg.centers, phases)
    nbin = n_samples // 2 + 1
    f = np.arange(nbin) * fs / n_samples
    # i_sig as a line spectrum: each tone sits on record bin n_segments * k
    X = np.zeros(nbin, dtype=complex)
    X[tone_bins * n_segments] = 0.5 * n_samples * drive.amplitudes * np.exp(1j * drive.phases)

    w = 2 * np.pi * f[1:]
    H = np.zeros(nbin, dtype=complex)
    H[1:] = signal_response(w, model)
    Y = gamma * X * H

    if noise:
        P_bkg = background_power(system.background)
        sources = {"shot": (shot_psd_input(P_laser, P_bkg, pv.rho), H)}
        trans = mna_transfers(w, model, THERMAL_SOURCES)
        for s in THERMAL_SOURCES:
            Hs = np.zeros(nbin, dtype=complex)
            Hs[1:] = trans[s]
            sources[s] = (thermal_source_psd(model.resistance(s), pv.T, run.thermal_convention), Hs)
        for name, (psd, Hs) in sources.items():
            # one-sided PSD S -> discrete white noise of variance S*fs/2
            x = rng.standard_normal(n_samples) * np.sqrt(psd * fs / 2)
            Y += np.fft.rfft(x) * Hs
    y = np.fft.irfft(Y, n=n_samples)

    fw, P = sps.welch(y, fs=fs, window="hann", nperseg=nperseg, noverlap=0, detrend=False, scaling="density")
    per = int(round(cfg.w / df))
    lo = np.round(cfg.band_start / df).astype(int) + per * np.arange(cfg.N)
    sig = np.empty(cfg.N)
    nse = np.empty(cfg.N)
    for i in range(cfg.N):
        band = P[lo[i] : lo[i] + per]
        t = tone_bins[i] - lo[i]
        mask = np.ones(per, dtype=bool)
        mask[max(t - 1, 0) : t + 2] = False
        floor = band[mask].mean() if noise else 0.0
        nse[i] = floor * cfg.w
        sig[i] = band.sum() * df - floor * per * df
    if noise:
        snr = sig / nse
    else:
        snr = np.full(cfg.N, np.inf)
    return MonteCarloResult(
        frequencies=cfg.centers,
        snr=snr,
        snr_analytic=report.snr,
        signal_power=sig,
        noise_power=nse,
        sample_rate=fs,
        n_samples=n_samples,
    )


def analytic_signal_power(cfg: OFDMConfig, gamma, m: SmallSignalModel):
    """Expected output power of each tone, V^2."""
    h = signal_response(2 * np.pi * cfg.centers, m)
    return gamma**2 * (cfg.sigma_s2 / cfg.N) * np.abs(h) ** 2


def snr_db(snr):
    with np.errstate(divide="ignore"):
        return 10 * np.log10(np.asarray(snr, dtype=float))

