# %% [markdown]
# Small-signal response of the receiver for the two wire inductances. The signal
# transfer is evaluated in closed form and checked against the nodal solve.

# %%
import matplotlib.pyplot as plt
import numpy as np

from _common import save
from rbcom import default_config, evaluate_link
from rbcom.network import bandwidth_3db, log_grid, mna_transfers, signal_response, transfer_grid

f = log_grid(1e3, 3e9, 2000)
w = 2 * np.pi * f
fig, axes = plt.subplots(1, 2, figsize=(11, 4), sharey=True)

for ax, case in zip(axes, ("L120", "L10")):
    m = evaluate_link(default_config(case)).model
    h = signal_response(w, m)
    t = mna_transfers(w, m)
    err = np.max(np.abs(h - t["photocurrent"]) / np.abs(t["photocurrent"]))
    bw = bandwidth_3db(transfer_grid(f, m))
    print(f"{case}: 3 dB bandwidth {bw / 1e6:.1f} MHz, closed form vs nodal {err:.1e}")
    ax.semilogx(f, 20 * np.log10(np.abs(h)), "k", lw=2, label="signal")
    for s in ("R_C", "R_s", "R_L"):
        ax.semilogx(f, 20 * np.log10(np.abs(t[s])), lw=1, label=s)
    ax.set(title=case, xlabel="f [Hz]", ylim=(-200, 60))
axes[0].set_ylabel("|H|^2 [dB re 1 V^2/A^2]")
axes[1].legend(fontsize=8)
save(fig, "frequency_response.png")

# %% [markdown]
# The R_C transfer flattens to R_C itself at both ends: C_0 isolates it at DC and the
# inductors isolate it at high frequency. The cell-side sources all share the signal path.
