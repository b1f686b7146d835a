# %% [markdown]
# # The sensor's thermal state
#
# Two capacitively coupled charge qubits at the symmetric gate point form the
# probe.  We build the Hamiltonian, compare the numerical Gibbs state with the
# closed-form expression, and watch the state wash out as the bath heats up.

# %%
import numpy as np

from thermoprobe.sensor import (
    SensorParams,
    analytic_spectrum,
    build_hamiltonian,
    gibbs_state,
    thermal_state_closed_form,
    thermal_state_derivative,
)

np.set_printoptions(precision=4, suppress=True)
params = SensorParams(ej1=1.0, ej2=0.1, em=1.0)
print(build_hamiltonian(params).real)

# %% [markdown]
# The analytic levels split by R1/4 and R2/4 around (Ec1 + Ec2)/4.

# %%
spectrum = analytic_spectrum(params)
print("levels:", spectrum.eps)
print("R1, R2:", spectrum.r1, spectrum.r2)

# %%
for t in (0.05, 0.5, 5.0):
    rho = thermal_state_closed_form(params, t)
    gap = np.max(np.abs(rho - gibbs_state(params, t)))
    print(f"T={t:<5} populations={np.diag(rho).real}  |closed - gibbs|={gap:.1e}")

# %% [markdown]
# The temperature derivative is what every sensitivity measure consumes.  It
# is traceless and fades as the state saturates at I/4.

# %%
for t in (0.1, 1.0, 10.0, 1e4):
    d = thermal_state_derivative(params, t)
    print(f"T={t:<7} trace={np.trace(d).real:+.1e}  norm={np.linalg.norm(d):.3e}")
