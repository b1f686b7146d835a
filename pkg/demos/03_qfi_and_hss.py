# %% [markdown]
# # Quantum Fisher information versus Hilbert-Schmidt speed
#
# The QFI needs the eigendecomposition of the state; the HSS needs only the
# derivative.  Over a temperature sweep the two curves peak together.

# %%
import numpy as np

from thermoprobe.metrology import (
    Povm,
    classical_fisher_information,
    hss,
    qfi_from_matrices,
    sld_eigenbasis,
)
from thermoprobe.sensor import SensorParams, thermal_state_closed_form, thermal_state_derivative

params = SensorParams(ej1=1.0, ej2=0.1, em=1.0)
temps = np.linspace(0.05, 5.0, 200)
rows = []
for t in temps:
    rho, drho = thermal_state_closed_form(params, t), thermal_state_derivative(params, t)
    report = qfi_from_matrices(rho, drho)
    rows.append((report.total, report.classical_part, hss(drho)))
qfi_curve, classical_curve, hss_curve = np.array(rows).T

print("argmax QFI at T =", temps[np.argmax(qfi_curve)])
print("argmax HSS at T =", temps[np.argmax(hss_curve)])

# %% [markdown]
# A Gibbs state shares the eigenvectors of H at every temperature, so only
# the populations move and the eigenvector-rotation part of the QFI vanishes.

# %%
print("largest eigenvector-rotation share:", np.max(1 - classical_curve / qfi_curve))

# %% [markdown]
# Measuring in the eigenbasis of the symmetric logarithmic derivative
# saturates the quantum bound.

# %%
t = 0.5
rho, drho = thermal_state_closed_form(params, t), thermal_state_derivative(params, t)
best = Povm.projective(sld_eigenbasis(rho, drho))
print("QFI:", qfi_from_matrices(rho, drho).total)
print("CFI in SLD basis:", classical_fisher_information(rho, drho, best))
print("CFI in computational basis:", classical_fisher_information(rho, drho, Povm.projective(np.eye(4))))
