"""Single-qubit teleportation through a mixed two-qubit resource.

With Bell measurement and Pauli correction the protocol acts on the input as a
Pauli mixture weighted by the resource's Bell-basis populations::

    rho_out = sum_i Tr[B_i rho_ch] sigma_i rho_in sigma_i
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InvalidState, ValidationError
from .matcore import as_hermitian, dagger, hermitian_eig, matrix_sqrt, tensor_product
from .sensor import SensorParams, closed_form_elements

CLASSICAL_FIDELITY = 2.0 / 3.0
PROBABILITY_ATOL = 1e-12
PURITY_ATOL = 1e-10

SIGMA_0 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SIGMA_0, SIGMA_X, SIGMA_Y, SIGMA_Z)


@dataclass(frozen=True)
class InputState:
    """Pure input ``cos(theta/2)|0> + exp(i phi) sin(theta/2)|1>``."""

    theta: float
    phi: float

    def __post_init__(self):
        if not (math.isfinite(self.theta) and math.isfinite(self.phi)):
            raise ValidationError("theta and phi must be finite")

    def ket(self) -> np.ndarray:
        return np.array(
            [math.cos(self.theta / 2), np.exp(1j * self.phi) * math.sin(self.theta / 2)]
        )


@dataclass(frozen=True)
class BellBasis:
    projectors: tuple

    def __iter__(self):
        return iter(self.projectors)

    def __getitem__(self, i):
        return self.projectors[i]


@dataclass(frozen=True)
class ChannelProbabilities:
    p: tuple

    def __iter__(self):
        return iter(self.p)

    def __getitem__(self, i):
        return self.p[i]

    def as_array(self) -> np.ndarray:
        return np.array(self.p, dtype=float)


def _bell_projectors() -> tuple:
    phi_plus = np.zeros(4, dtype=complex)
    phi_plus[0] = phi_plus[3] = 1.0
    b0 = 0.5 * np.outer(phi_plus, phi_plus.conj())
    out = [b0]
    for sigma in PAULIS[1:]:
        local = tensor_product(SIGMA_0, sigma)
        out.append(local @ b0 @ local)
    return tuple(out)


_BELL = _bell_projectors()


def bell_basis() -> BellBasis:
    """Projectors ``B_0 = |Phi+><Phi+|`` and ``B_i = (s0 x s_i) B_0 (s0 x s_i)``."""
    return BellBasis(tuple(b.copy() for b in _BELL))


def input_state(s: InputState) -> np.ndarray:
    ket = s.ket()
    return np.outer(ket, ket.conj())


def bell_overlaps(m) -> np.ndarray:
    """``Tr[B_i m]`` for i = 0..3 without any validation (works for derivatives)."""
    m = np.asarray(m, dtype=complex)
    if m.shape != (4, 4):
        raise DimensionMismatch(f"expected a 4x4 operator, got {m.shape}")
    return np.array([np.trace(b @ m).real for b in _BELL])


def channel_probabilities(rho_ch) -> ChannelProbabilities:
    """Bell-basis populations of the resource.

    Values in ``[-1e-12, 0)`` are treated as round-off: clamped to zero and the
    vector renormalized.  Anything more negative is an :class:`InvalidState`.
    """
    p = bell_overlaps(as_hermitian(rho_ch))
    if np.any(p < -PROBABILITY_ATOL):
        raise InvalidState(f"negative Bell population in {p}")
    if abs(p.sum() - 1.0) > PROBABILITY_ATOL:
        raise InvalidState(f"Bell populations sum to {p.sum()!r}")
    if np.any(p < 0):
        p = np.clip(p, 0.0, None)
        p = p / p.sum()
    return ChannelProbabilities(tuple(float(x) for x in p))


def pauli_mixture(weights, rho_in) -> np.ndarray:
    rho_in = np.asarray(rho_in, dtype=complex)
    if rho_in.shape != (2, 2):
        raise DimensionMismatch(f"expected a 2x2 input, got {rho_in.shape}")
    out = sum(w * (s @ rho_in @ s) for w, s in zip(weights, PAULIS))
    return 0.5 * (out + out.conj().T)


def teleport_output(rho_ch, rho_in) -> np.ndarray:
    return pauli_mixture(channel_probabilities(rho_ch).p, rho_in)


def teleport_output_derivative(drho_ch, rho_in) -> np.ndarray:
    """Derivative of the teleported state for a parameter that enters only through the resource."""
    return pauli_mixture(bell_overlaps(drho_ch), rho_in)


def teleport_output_closed_form(p: SensorParams, t, s: InputState) -> np.ndarray:
    """Teleported thermal state written directly in terms of the closed-form elements."""
    e = closed_form_elements(p, t)
    bsum = (e.b1 + e.b2) / e.f1
    bdiff = (e.b1 - e.b2) / e.f1
    f2 = e.f2 / e.f1
    ct, st = math.cos(s.theta), math.sin(s.theta)
    cp, sp = math.cos(s.phi), math.sin(s.phi)
    off = -st * (f2 * cp + 1j * bdiff * sp) / 2
    return np.array(
        [[(1 - bsum * ct) / 2, off], [np.conj(off), (1 + bsum * ct) / 2]], dtype=complex
    )


def _purity(rho: np.ndarray) -> float:
    return float(np.trace(rho @ rho).real)


def _floor_noise(values: np.ndarray) -> np.ndarray:
    # roundoff-level eigenvalues would otherwise surface as sqrt(eps) ~ 1e-8
    floor = 64 * np.finfo(float).eps * max(float(np.max(np.abs(values))), 1e-300)
    return np.where(values > floor, values, 0.0)


def _psd_sqrt(m: np.ndarray) -> np.ndarray:
    eig = hermitian_eig(m)
    if eig.values[0] < -1e-12:
        return matrix_sqrt(m)  # raises DomainError
    return (eig.vectors * np.sqrt(_floor_noise(eig.values))) @ dagger(eig.vectors)


def uhlmann_fidelity(rho, sigma) -> float:
    """``(Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2`` through spectral square roots."""
    rho = as_hermitian(rho)
    sigma = as_hermitian(sigma)
    if rho.shape != sigma.shape:
        raise DimensionMismatch(f"{rho.shape} vs {sigma.shape}")
    root = _psd_sqrt(rho)
    inner = root @ sigma @ root
    values = hermitian_eig(0.5 * (inner + dagger(inner))).values
    return float(np.sum(np.sqrt(_floor_noise(values)))) ** 2


def fidelity(rho_in, rho_out) -> float:
    """Teleportation fidelity; pure inputs use the shortcut ``Tr[rho_in rho_out]``."""
    rho_in = as_hermitian(rho_in)
    rho_out = as_hermitian(rho_out)
    if rho_in.shape != rho_out.shape:
        raise DimensionMismatch(f"{rho_in.shape} vs {rho_out.shape}")
    if abs(_purity(rho_in) - 1.0) <= PURITY_ATOL:
        return float(np.trace(rho_in @ rho_out).real)
    return uhlmann_fidelity(rho_in, rho_out)
