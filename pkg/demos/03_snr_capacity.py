# %% [markdown]
# Per-subchannel SNR and Shannon capacity with equal power on every subcarrier.

# %%
import matplotlib.pyplot as plt
import numpy as np

from _common import save
from rbcom import default_config, evaluate_link
from rbcom.link import snr_db

fig, ax = plt.subplots(1, 2, figsize=(11, 4))
for case in ("L120", "L10"):
    cfg = default_config(case)
    rep = evaluate_link(cfg)
    print(f"{case}: N = {cfg.ofdm.N}, total capacity {rep.total_capacity / 1e9:.3f} Gb/s")
    ax[0].plot(rep.frequencies / 1e6, snr_db(rep.snr), label=case)
    ax[1].plot(rep.frequencies / 1e6, rep.capacity / 1e6, label=case)
ax[0].set(xlabel="f [MHz]", ylabel="SNR [dB]")
ax[1].set(xlabel="f [MHz]", ylabel="capacity [Mb/s]")
ax[1].legend()

# %% [markdown]
# What sets the noise floor: at band centre almost all of it is thermal noise
# from the coupling resistor, with shot noise several orders below.

# %%
rep = evaluate_link(default_config("L10"))
sp = rep.spectra
fc = 100e6
terms = {s: float(sp.thermal_terms[s][np.searchsorted(sp.frequencies, fc)]) for s in sp.thermal_terms}
shot = float(sp.shot.at(fc))
total = shot + sum(terms.values())
for name, v in sorted(terms.items(), key=lambda kv: -kv[1]):
    print(f"  thermal {name:5s} {100 * v / total:9.5f} %")
print(f"  shot          {100 * shot / total:9.5f} %")

# %% [markdown]
# Sensitivity to the thermal-noise convention: the current-source form is the
# default; the alternative scales each source by R^2 and is kept for comparison.

# %%
alt = evaluate_link(default_config("L10").replace(run={"thermal_convention": "as_printed"}))
print(f"as_printed convention: {alt.total_capacity / 1e9:.3f} Gb/s")
save(fig, "snr_capacity.png")
