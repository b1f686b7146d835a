"""Quantum thermometry with a pair of capacitively coupled charge qubits.

Submodules:

* :mod:`thermoprobe.matcore` - small Hermitian linear algebra
* :mod:`thermoprobe.sensor` - Hamiltonian, spectrum and thermal states
* :mod:`thermoprobe.teleport` - mixed-resource teleportation channel
* :mod:`thermoprobe.metrology` - QFI, SLD, HSS and classical Fisher information
* :mod:`thermoprobe.thermolab` - temperature sweeps, presets, export and CLI
"""

__version__ = "0.1.0"
