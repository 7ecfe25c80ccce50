# %% [markdown]
# Charging power against capacity as the received laser power grows.

# %%
import warnings

import matplotlib.pyplot as plt
import numpy as np

from _common import save
from rbcom import default_config
from rbcom.errors import ModulationWarning
from rbcom.link import power_capacity_sweep

cfg = default_config("L10")
grid = np.linspace(0.05, 0.6, 23)
with warnings.catch_warnings(record=True) as caught:
    warnings.simplefilter("always", ModulationWarning)
    pts = power_capacity_sweep(grid, cfg, workers=1)
print(f"{len(caught)} sweep points clip the modulation at the low-power end")

P = np.array([p.P_chg for p in pts])
C = np.array([p.capacity for p in pts])
for p, pc, c in zip(grid[::4], P[::4], C[::4]):
    print(f"P_laser {p * 1e3:5.0f} mW  P_chg {pc * 1e3:6.2f} mW  C {c / 1e9:.6f} Gb/s")

# %% [markdown]
# Charging power keeps rising while the capacity falls, but only slightly: shot noise
# grows with the light level yet stays far below the coupling resistor's thermal noise.

# %%
fig, ax = plt.subplots(figsize=(6, 4))
ax.plot(grid * 1e3, P * 1e3, "C0")
ax.set(xlabel="P_laser [mW]", ylabel="P_chg [mW]")
ax2 = ax.twinx()
ax2.plot(grid * 1e3, C / 1e9, "C1")
ax2.set_ylabel("capacity [Gb/s]")
save(fig, "power_tradeoff.png")
