"""Published nominal results and their comparison tolerances.

``compare`` turns a run summary into a list of documented deviations: every
reference quantity present in the summary whose relative error exceeds the
tolerance is reported with the measured value, so an out-of-tolerance result
is never silent.
"""

from dataclasses import asdict, dataclass


@dataclass(frozen=True)
class Reference:
    value: float
    rtol: float
    unit: str


# keyed by summary field; case-specific entries carry the case suffix
REFERENCES = {
    "gamma": Reference(0.0557, 0.005, "1"),
    "I_ph_A": Reference(0.1492, 1e-12, "A"),
    "sigma_ph_ac2_A2": Reference(3.1e-5, 0.01, "A^2"),
    "r_physical_ohm": Reference(839.5, 0.02, "ohm"),
    "bandwidth_Hz@L120": Reference(120e6, 0.25, "Hz"),
    "bandwidth_Hz@L10": Reference(200e6, 0.25, "Hz"),
    "total_capacity_bps@L120": Reference(1.19e9, 0.15, "bit/s"),
    "total_capacity_bps@L10": Reference(1.76e9, 0.15, "bit/s"),
}


@dataclass(frozen=True)
class Deviation:
    quantity: str
    value: float
    reference: float
    relative_error: float
    tolerance: float
    unit: str

    def as_dict(self):
        return asdict(self)

    def __str__(self):
        return (
            f"{self.quantity} = {self.value:.6g} {self.unit} deviates from reference "
            f"{self.reference:.6g} {self.unit} by {100 * self.relative_error:+.2f}% "
            f"(tolerance {100 * self.tolerance:.3g}%)"
        )


def identify_case(cfg):
    """Name of the wire-inductance case ``cfg`` matches, or None."""
    from .config import CASES

    for name, case in CASES.items():
        net, ofdm = case["network"], case["ofdm"]
        if cfg.network.L == net["L"] and cfg.network.R_C == net["R_C"] and cfg.ofdm.N == ofdm["N"]:
            return name
    return None


def compare(summary, case=None):
    """Deviations of ``summary`` values from the references (empty if all agree)."""
    out = []
    for key, ref in REFERENCES.items():
        name, _, ref_case = key.partition("@")
        if ref_case and ref_case != case:
            continue
        if name not in summary:
            continue
        value = float(summary[name])
        err = (value - ref.value) / ref.value
        if abs(err) > ref.rtol:
            out.append(Deviation(key, value, ref.value, err, ref.rtol, ref.unit))
    return out
