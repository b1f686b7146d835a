# %% [markdown]
# # Local versus remote thermometry
#
# Alice holds the sensor and estimates the temperature directly.  Bob only
# sees the qubit teleported through it.  Teleportation is a fixed channel
# that cannot add information, so Bob's QFI never beats Alice's.

# %%
from pathlib import Path

import numpy as np

from thermoprobe.thermolab import export, figure_preset, run_sweep

result = run_sweep(figure_preset("fig4"))
direct = result.column("qfi_direct")
remote = result.column("qfi_remote")
temps = result.column("T")
print("smallest direct - remote gap:", np.min(direct - remote))
print("peak direct QFI %.3f at T=%.3f" % (direct.max(), temps[direct.argmax()]))
print("peak remote QFI %.3f at T=%.3f" % (remote.max(), temps[remote.argmax()]))

# %% [markdown]
# Stronger mutual coupling helps the remote scheme.

# %%
coupling = run_sweep(figure_preset("fig2d"))
for em in coupling.vary_values():
    print(f"em={em:<4} peak remote QFI {coupling.column('qfi_remote', em).max():.4f}")

# %%
out = Path("fig4.svg")
export(result, "svg", out)
print("wrote", out.resolve())
