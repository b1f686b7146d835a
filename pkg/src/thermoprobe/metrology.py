"""Single-parameter quantum estimation: QFI, SLD, HSS and classical Fisher information.

Every quantity takes a density matrix ``rho`` and its derivative ``drho`` with
respect to the estimated parameter.  Eigenvalue pairs whose sum falls below
``cutoff`` lie outside the support of ``rho`` and are excluded.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import (
    DegenerateSupportWarning,
    DimensionMismatch,
    DomainEdge,
    LengthMismatch,
    NoConvergence,
    SingularOutcome,
    ValidationError,
)
from .matcore import Eigensystem, as_hermitian, dagger, hermitian_eig

SUPPORT_CUTOFF = 1e-12
DEGENERACY_TOL = 1e-10
DROPPED_WEIGHT_TOL = 1e-10


@dataclass(frozen=True)
class ParameterizedState:
    """A one-parameter family of density matrices.

    ``lower_bound`` is an exclusive lower edge of the parameter domain (0 for
    temperature); finite differences refuse to step across it.
    """

    evaluate: Callable[[float], np.ndarray]
    derivative: Optional[Callable[[float], np.ndarray]] = None
    lower_bound: Optional[float] = None


@dataclass(frozen=True)
class QfiReport:
    total: float
    classical_part: float
    quantum_part: float
    skipped_terms: int = 0
    dropped_weight: float = 0.0
    derivative_source: str = "analytic"

    def cramer_rao_bound(self, repetitions: int = 1) -> float:
        """Smallest achievable estimator variance ``1 / (m F)``."""
        if repetitions < 1:
            raise ValidationError("repetitions must be >= 1")
        if self.total <= 0:
            return math.inf
        return 1.0 / (repetitions * self.total)


@dataclass(frozen=True)
class Povm:
    effects: tuple

    def __post_init__(self):
        effects = tuple(as_hermitian(e) for e in self.effects)
        if not effects:
            raise ValidationError("a POVM needs at least one effect")
        dim = effects[0].shape[0]
        total = sum(effects)
        if np.max(np.abs(total - np.eye(dim))) > 1e-10:
            raise ValidationError("POVM effects do not sum to the identity")
        for e in effects:
            if hermitian_eig(e).values[0] < -1e-12:
                raise ValidationError("POVM effect is not positive semidefinite")
        object.__setattr__(self, "effects", effects)

    @classmethod
    def projective(cls, basis: np.ndarray) -> "Povm":
        """Rank-one projectors onto the columns of a unitary ``basis``."""
        basis = np.asarray(basis, dtype=complex)
        if basis.ndim != 2 or basis.shape[0] != basis.shape[1]:
            raise DimensionMismatch(f"basis must be square, got shape {basis.shape}")
        if np.max(np.abs(dagger(basis) @ basis - np.eye(basis.shape[0]))) > 1e-10:
            raise ValidationError("basis columns are not orthonormal")
        # projectors onto orthonormal columns are PSD and complete by construction
        povm = object.__new__(cls)
        effects = tuple(np.outer(basis[:, k], basis[:, k].conj()) for k in range(basis.shape[1]))
        object.__setattr__(povm, "effects", effects)
        return povm


def _in_eigenbasis(rho, drho) -> tuple[Eigensystem, np.ndarray]:
    eig = hermitian_eig(rho)
    d = as_hermitian(drho, atol=1e-9)
    return eig, dagger(eig.vectors) @ d @ eig.vectors


def qfi_from_matrices(
    rho, drho, *, cutoff: float = SUPPORT_CUTOFF, derivative_source: str = "analytic"
) -> QfiReport:
    """QFI of ``rho`` for the tangent ``drho``.

    ``total`` is the eigenbasis pair sum ``2 sum |<n|drho|m>|^2 / (l_n + l_m)``.
    The split into ``classical_part`` (eigenvalue changes) and ``quantum_part``
    (eigenvector rotation) is computed separately; the eigenvector overlap
    ``<m|d psi_n>`` is taken as ``<m|drho|n> / (l_n - l_m)``.  Within a
    degenerate eigenspace the eigenvectors are not determined by ``rho`` alone,
    so those pairs are counted with the classical part, which is equivalent to
    choosing the eigenbasis that diagonalizes ``drho`` there.
    """
    eig, d = _in_eigenbasis(rho, drho)
    lam = eig.values
    n = lam.size
    lsum = lam[:, None] + lam[None, :]
    ldiff = lam[:, None] - lam[None, :]
    weight = np.abs(d) ** 2
    support = lsum > cutoff

    total = 2.0 * float(np.sum(weight[support] / lsum[support]))

    classical = 0.0
    quantum = 0.0
    for i in range(n):
        for j in range(n):
            if not support[i, j]:
                continue
            if i == j:
                classical += d[i, i].real ** 2 / lam[i]
            elif abs(ldiff[i, j]) <= DEGENERACY_TOL:
                classical += 2.0 * weight[i, j] / lsum[i, j]
            else:
                overlap = d[j, i] / (lam[i] - lam[j])
                quantum += 2.0 * ldiff[i, j] ** 2 / lsum[i, j] * abs(overlap) ** 2

    skipped = int(np.count_nonzero(~support))
    dropped = float(np.max(weight[~support])) if skipped else 0.0
    if skipped and dropped > DROPPED_WEIGHT_TOL:
        warnings.warn(
            f"{skipped} eigenvalue pairs outside the support carried |drho|^2 up to {dropped:.2e}",
            DegenerateSupportWarning,
            stacklevel=2,
        )
    return QfiReport(
        total=total,
        classical_part=float(classical),
        quantum_part=float(quantum),
        skipped_terms=skipped,
        dropped_weight=dropped,
        derivative_source=derivative_source,
    )


def qfi(state: ParameterizedState, at: float, *, cutoff: float = SUPPORT_CUTOFF) -> QfiReport:
    """QFI of a parameterized family; analytic derivative preferred, else finite difference."""
    rho = state.evaluate(at)
    if state.derivative is not None:
        return qfi_from_matrices(rho, state.derivative(at), cutoff=cutoff)
    drho = finite_difference(state, at)
    return qfi_from_matrices(rho, drho, cutoff=cutoff, derivative_source="finite_difference")


def sld(rho, drho, *, cutoff: float = SUPPORT_CUTOFF) -> np.ndarray:
    """Symmetric logarithmic derivative ``L`` with ``drho = (L rho + rho L) / 2``.

    Elements between eigenvectors outside the support are set to zero.
    """
    eig, d = _in_eigenbasis(rho, drho)
    lam = eig.values
    lsum = lam[:, None] + lam[None, :]
    support = lsum > cutoff
    l_eig = np.zeros_like(d)
    l_eig[support] = 2.0 * d[support] / lsum[support]
    out = eig.vectors @ l_eig @ dagger(eig.vectors)
    return 0.5 * (out + dagger(out))


def qfi_sld_trace(rho, drho, *, cutoff: float = SUPPORT_CUTOFF) -> float:
    """QFI as ``Tr[rho L^2]``."""
    big_l = sld(rho, drho, cutoff=cutoff)
    return float(np.trace(np.asarray(rho) @ big_l @ big_l).real)


def sld_eigenbasis(rho, drho, *, cutoff: float = SUPPORT_CUTOFF) -> np.ndarray:
    """Unitary whose columns are the SLD eigenvectors (an optimal measurement basis)."""
    return hermitian_eig(sld(rho, drho, cutoff=cutoff)).vectors


def hss(drho) -> float:
    """Hilbert-Schmidt speed ``sqrt(Tr[drho^2] / 2)``."""
    mag = np.abs(np.asarray(drho, dtype=complex))
    scale = float(mag.max(initial=0.0))
    if scale == 0.0:
        return 0.0
    # dividing out the largest entry keeps the squares clear of under/overflow
    return scale * math.sqrt(0.5 * float(np.sum((mag / scale) ** 2)))


def classical_fisher_information(
    rho, drho, povm: Povm, *, cutoff: float = SUPPORT_CUTOFF
) -> float:
    """Fisher information of the outcome distribution ``p_x = Tr[E_x rho]``.

    Raises:
        SingularOutcome: an outcome has vanishing probability but nonzero slope.
    """
    rho = np.asarray(rho, dtype=complex)
    drho = np.asarray(drho, dtype=complex)
    total = 0.0
    for e in povm.effects:
        p = float(np.trace(e @ rho).real)
        dp = float(np.trace(e @ drho).real)
        if p <= cutoff:
            if abs(dp) <= cutoff:
                continue
            raise SingularOutcome(f"outcome with p = {p:.3e} has slope {dp:.3e}")
        total += dp * dp / p
    return total


def _probability_vector(x, name: str) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or np.any(x < 0) or abs(x.sum() - 1.0) > 1e-10:
        raise ValidationError(f"{name} is not a probability vector")
    return x


def classical_distance_alpha(p, q, alpha: float, *, rooted: bool = True) -> float:
    """Distance ``d_a`` between probability vectors.

    ``rooted=True`` uses ``(1/2 sum |p^(1/a) - q^(1/a)|^a)^(1/a)``;
    ``rooted=False`` uses ``(1/2 sum |p - q|^a)^(1/a)``, whose quantum
    ``a = 2`` counterpart is the Hilbert-Schmidt speed.
    """
    if alpha < 1:
        raise ValidationError(f"alpha must be >= 1, got {alpha}")
    p = _probability_vector(p, "p")
    q = _probability_vector(q, "q")
    if p.shape != q.shape:
        raise LengthMismatch(f"{p.size} vs {q.size} outcomes")
    if rooted:
        diff = np.abs(p ** (1.0 / alpha) - q ** (1.0 / alpha))
    else:
        diff = np.abs(p - q)
    return float((0.5 * np.sum(diff**alpha)) ** (1.0 / alpha))


def classical_statistical_speed(
    family: Callable[[float], Sequence[float]],
    at: float,
    alpha: float,
    *,
    rooted: bool = True,
    step: float = 1e-3,
    rtol: float = 1e-6,
    max_halvings: int = 20,
) -> float:
    """One-sided derivative of ``d_a(p(at + h), p(at))`` at ``h = 0+``.

    The quotient ``d(h) / h`` is re-evaluated with the step halved until two
    successive estimates agree to ``rtol``.
    """
    base = family(at)

    def quotient(h):
        return classical_distance_alpha(family(at + h), base, alpha, rooted=rooted) / h

    h = step
    prev = quotient(h)
    for _ in range(max_halvings):
        h *= 0.5
        cur = quotient(h)
        scale = max(abs(cur), abs(prev))
        if abs(cur - prev) <= rtol * scale or scale < 1e-14:
            return cur
        prev = cur
    raise NoConvergence(f"speed estimate did not settle after {max_halvings} halvings")


def default_step(at: float) -> float:
    return max(1e-6, 1e-4 * abs(at))


def finite_difference(state: ParameterizedState, at: float, step: Optional[float] = None) -> np.ndarray:
    """Central difference ``(rho(at + h) - rho(at - h)) / 2h``, Hermitized."""
    h = default_step(at) if step is None else float(step)
    if state.lower_bound is not None and at - h <= state.lower_bound:
        raise DomainEdge(f"{at} - {h} leaves the domain (> {state.lower_bound})")
    m = (np.asarray(state.evaluate(at + h)) - np.asarray(state.evaluate(at - h))) / (2.0 * h)
    return 0.5 * (m + dagger(m))
