# %% [markdown]
# DC side of the receiver: where the panel settles on the 0.6 ohm charging load,
# and how the output current tracks the photocurrent.

# %%
import matplotlib.pyplot as plt
import numpy as np

from _common import save
from rbcom import default_config
from rbcom.pv_dc import iv_curve, open_circuit_voltage, output_vs_photocurrent, photocurrent, solve_operating_point

cfg = default_config()
pv, R_L = cfg.pv, cfg.network.R_L

# 200 mW of laser light on the panel
I_ph = photocurrent(cfg.run.P_laser, pv)
op = solve_operating_point(I_ph, R_L, pv)
print(f"I_ph = {I_ph * 1e3:.1f} mA")
print(f"I_pv_o = {op.I_pv_o * 1e3:.2f} mA, V_pv_o = {op.V_pv_o * 1e3:.1f} mV, V_d = {op.V_d:.4f} V")
print(f"charging power = {op.P_chg * 1e3:.2f} mW, residual = {op.residual:.1e} A")

# %% [markdown]
# I-V curves for a few illumination levels, with the load line through them.

# %%
fig, ax = plt.subplots(1, 2, figsize=(10, 4))
for i in (0.05, 0.1, 0.1492, 0.2, 0.3):
    V, I = iv_curve(i, np.linspace(0, open_circuit_voltage(i, pv), 200), pv)
    ax[0].plot(V, I * 1e3, label=f"{i * 1e3:.0f} mA")
V = np.linspace(0, 0.25, 50)
ax[0].plot(V, V / R_L * 1e3, "k--", lw=1, label="load line")
ax[0].set(xlabel="V_pv_o [V]", ylabel="I_pv_o [mA]", ylim=(0, 320))
ax[0].legend(fontsize=8)

# %% [markdown]
# Output current against photocurrent: linear while the diode is off, then it bends
# and saturates once the junction voltage approaches the knee.

# %%
grid, I = output_vs_photocurrent(R_L, np.linspace(0, 0.5, 201), pv)
ax[1].plot(grid * 1e3, I * 1e3)
ax[1].plot(grid * 1e3, grid * 1e3, ":", color="gray")
ax[1].set(xlabel="I_ph [mA]", ylabel="I_pv_o [mA]")
slope = np.gradient(I, grid)
print(f"slope at 10 mA: {slope[4]:.4f}, at 500 mA: {slope[-1]:.4f}")
save(fig, "operating_point.png")
