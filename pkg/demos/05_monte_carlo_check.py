# %% [markdown]
# Statistical check of the SNR expression: synthesize the received waveform with
# random tone phases and white noise sources, then estimate the SNR from averaged
# periodograms.

# %%
import matplotlib.pyplot as plt
import numpy as np

from _common import save
from rbcom import default_config
from rbcom.link import monte_carlo_snr, snr_db

cfg = default_config("L10")
mc = monte_carlo_snr(cfg, seed=1)
delta = snr_db(mc.snr) - snr_db(mc.snr_analytic)
print(f"fs = {mc.sample_rate / 1e6:.1f} MHz, {mc.n_samples} samples")
print(f"{100 * np.mean(np.abs(delta) <= 1):.1f}% of subchannels within 1 dB, worst {np.max(np.abs(delta)):.2f} dB")

# %%
fig, ax = plt.subplots(figsize=(7, 4))
ax.plot(mc.frequencies / 1e6, snr_db(mc.snr_analytic), "k", label="analytic")
ax.plot(mc.frequencies / 1e6, snr_db(mc.snr), ".", ms=3, label="simulated")
ax.set(xlabel="f [MHz]", ylabel="SNR [dB]")
ax.legend()
save(fig, "monte_carlo.png")
