"""Two capacitively coupled charge qubits in contact with a thermal bath.

Units: hbar = k_B = 1, so energies and temperatures share one scale.  States
are written in the basis ``(|00>, |10>, |01>, |11>)`` where ``|n1 n2>`` counts
excess Cooper pairs in box 1 and box 2, i.e. basis index ``n1 + 2 * n2``.

Two independent routes produce the thermal state.  :func:`gibbs_state`
diagonalizes the Hamiltonian numerically and works for any gate charge;
:func:`thermal_state_closed_form` evaluates the analytic matrix elements that
hold at the symmetric point ``ng1 = ng2 = 1/2``.
"""
from __future__ import annotations

import dataclasses
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateCouplingsWarning,
    NonPositiveTemperature,
    NotSymmetricPoint,
    ValidationError,
)
from .matcore import hermitian_eig

SYMMETRIC_CHARGE = 0.5
# cosh/sinh are exact below this argument; above it use scaled exponentials
_DIRECT_HYPERBOLIC_LIMIT = 700.0


@dataclass(frozen=True)
class SensorParams:
    """Josephson (``ej*``), mutual (``em``) and charging (``ec*``) energies plus gate charges."""

    ej1: float
    ej2: float
    em: float
    ec1: float = 1.0
    ec2: float = 1.0
    ng1: float = SYMMETRIC_CHARGE
    ng2: float = SYMMETRIC_CHARGE

    def __post_init__(self):
        for name in ("ej1", "ej2", "em", "ec1", "ec2"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0):
                raise ValidationError(f"{name} must be finite and >= 0, got {value!r}")
        for name in ("ng1", "ng2"):
            if not math.isfinite(getattr(self, name)):
                raise ValidationError(f"{name} must be finite")

    @property
    def symmetric_point(self) -> bool:
        return self.ng1 == SYMMETRIC_CHARGE and self.ng2 == SYMMETRIC_CHARGE

    @property
    def r1(self) -> float:
        return math.hypot(2.0 * (self.ej1 - self.ej2), self.em)

    @property
    def r2(self) -> float:
        return math.hypot(2.0 * (self.ej1 + self.ej2), self.em)

    def replace(self, **changes) -> "SensorParams":
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class ThermalPoint:
    """Bath temperature; ``math.inf`` is allowed and means ``beta = 0``."""

    temperature: float

    def __post_init__(self):
        t = self.temperature
        if math.isnan(t) or t <= 0:
            raise NonPositiveTemperature(f"temperature must be > 0, got {t!r}")

    @property
    def beta(self) -> float:
        return 1.0 / self.temperature


def thermal_point(t) -> ThermalPoint:
    return t if isinstance(t, ThermalPoint) else ThermalPoint(float(t))


@dataclass(frozen=True)
class SensorSpectrum:
    """Analytic eigenpairs in the order eps1..eps4; ``vecs[:, n]`` pairs with ``eps[n]``."""

    eps: np.ndarray
    r1: float
    r2: float
    vecs: np.ndarray


@dataclass(frozen=True)
class ClosedFormElements:
    """Closed-form matrix-element ingredients, all hyperbolic terms scaled by ``exp(-log_scale)``.

    ``a1``/``a2`` are unscaled.  Every density-matrix entry is a ratio of the
    scaled quantities, so the common factor cancels.
    """

    a1: float
    a2: float
    f1: float
    f2: float
    b1: float
    b2: float
    c1: float
    c2: float
    d: float
    log_scale: float


def electrostatic_energy(p: SensorParams, n1: int, n2: int) -> float:
    if n1 not in (0, 1) or n2 not in (0, 1):
        raise ValidationError(f"Cooper-pair numbers must be 0 or 1, got ({n1}, {n2})")
    x1 = p.ng1 - n1
    x2 = p.ng2 - n2
    return p.ec1 * x1**2 + p.ec2 * x2**2 + p.em * x1 * x2


def build_hamiltonian(p: SensorParams) -> np.ndarray:
    """4x4 real symmetric Hamiltonian in the ``(|00>, |10>, |01>, |11>)`` basis."""
    h = np.diag(
        [
            electrostatic_energy(p, 0, 0),
            electrostatic_energy(p, 1, 0),
            electrostatic_energy(p, 0, 1),
            electrostatic_energy(p, 1, 1),
        ]
    ).astype(complex)
    j1 = -0.5 * p.ej1
    j2 = -0.5 * p.ej2
    h[0, 1] = h[1, 0] = h[2, 3] = h[3, 2] = j1
    h[0, 2] = h[2, 0] = h[1, 3] = h[3, 1] = j2
    return h


def _require_symmetric(p: SensorParams) -> None:
    if not p.symmetric_point:
        raise NotSymmetricPoint(
            f"closed forms need ng1 = ng2 = 0.5, got ({p.ng1}, {p.ng2})"
        )


def _sector_vector(coupling: float, em: float, r: float, sign: float) -> tuple[float, float]:
    # (outer, inner) amplitudes solving the 2x2 sector problem for eigenvalue
    # shift + sign*r/4; two algebraically equal forms, pick the better conditioned
    first = (2.0 * coupling, em - sign * r)
    second = (-(em + sign * r), 2.0 * coupling)
    a, b = first if math.hypot(*first) >= math.hypot(*second) else second
    # each amplitude appears twice in the 4-vector, hence the extra sqrt(2)
    norm = math.hypot(a, b) * math.sqrt(2.0)
    if norm == 0.0:
        half = math.sqrt(0.5)
        return (half, 0.0) if sign < 0 else (0.0, half)
    return a / norm, b / norm


def analytic_spectrum(p: SensorParams) -> SensorSpectrum:
    """Closed-form eigenvalues and normalized eigenvectors at the symmetric point.

    The antisymmetric pair (eps1, eps2) has the form
    ``-|00> - x|10> + x|01> + |11>`` with ``x = (E_m +- R1) / (2 (E_J1 - E_J2))``;
    the symmetric pair (eps3, eps4) is ``|00> + y|10> + y|01> + |11>`` with
    ``y = (E_m +- R2) / (2 (E_J1 + E_J2))``.  When a denominator vanishes the
    equivalent form with ``(E_m -+ R)`` in the denominator is used instead.
    """
    _require_symmetric(p)
    r1, r2 = p.r1, p.r2
    shift = 0.25 * (p.ec1 + p.ec2)
    eps = np.array(
        [shift - r1 / 4, shift + r1 / 4, shift - r2 / 4, shift + r2 / 4], dtype=float
    )
    if (p.ej1 == p.ej2 and p.em == 0.0) or (p.ej1 + p.ej2 == 0.0 and p.em == 0.0):
        warnings.warn(
            "coupling sector is degenerate; analytic eigenbasis is arbitrary",
            DegenerateCouplingsWarning,
            stacklevel=2,
        )
    vecs = np.zeros((4, 4), dtype=complex)
    for col, sign in ((0, -1.0), (1, 1.0)):
        a, b = _sector_vector(p.ej1 - p.ej2, p.em, r1, sign)
        vecs[:, col] = [-a, -b, b, a]
    for col, sign in ((2, -1.0), (3, 1.0)):
        a, b = _sector_vector(p.ej1 + p.ej2, p.em, r2, sign)
        vecs[:, col] = [a, b, b, a]
    return SensorSpectrum(eps=eps, r1=r1, r2=r2, vecs=vecs)


def _weights(energies: np.ndarray, beta: float) -> tuple[np.ndarray, float]:
    shifted = energies - energies.min()
    w = np.exp(-beta * shifted)
    total = float(w.sum())
    return w / total, total


def gibbs_state(p: SensorParams, t) -> np.ndarray:
    """Thermal state ``exp(-H/T) / z`` built from the numerical eigensystem of ``H``."""
    t = thermal_point(t)
    if t.beta == 0.0:
        return np.eye(4, dtype=complex) / 4
    eig = hermitian_eig(build_hamiltonian(p))
    w, _ = _weights(eig.values, t.beta)
    rho = (eig.vectors * w) @ eig.vectors.conj().T
    return 0.5 * (rho + rho.conj().T)


def log_partition_function(p: SensorParams, t) -> float:
    """``log z`` with ``z = Tr exp(-H/T)``, evaluated without overflow."""
    t = thermal_point(t)
    values = hermitian_eig(build_hamiltonian(p)).values
    _, total = _weights(values, t.beta)
    return -t.beta * float(values.min()) + math.log(total)


def _scaled_hyperbolics(r: float, temperature: float, log_scale: float):
    """Return ``cosh(A) e^-m`` and ``sinh(A) e^-m / r`` for ``A = r / 4T``."""
    if math.isinf(temperature):
        return 1.0, 0.0
    a = r / (4.0 * temperature)
    if log_scale < _DIRECT_HYPERBOLIC_LIMIT:
        scale = math.exp(-log_scale)
        ch = math.cosh(a) * scale
        sh = math.sinh(a) * scale
    else:
        up = math.exp(a - log_scale)
        down = math.exp(-a - log_scale)
        ch = 0.5 * (up + down)
        sh = 0.5 * (up - down)
    sh_over_r = sh / r if r > 0 else math.exp(-log_scale) / (4.0 * temperature)
    return ch, sh_over_r


def closed_form_elements(p: SensorParams, t) -> ClosedFormElements:
    _require_symmetric(p)
    t = thermal_point(t)
    r1, r2 = p.r1, p.r2
    temp = t.temperature
    a1 = r1 / (4.0 * temp)
    a2 = r2 / (4.0 * temp)
    m = max(a1, a2)
    ch1, s1 = _scaled_hyperbolics(r1, temp, m)
    ch2, s2 = _scaled_hyperbolics(r2, temp, m)
    f1 = ch1 + ch2
    return ClosedFormElements(
        a1=a1,
        a2=a2,
        f1=f1,
        f2=ch1 - ch2,
        b1=p.em * s1,
        b2=p.em * s2,
        c1=(p.ej1 - p.ej2) * s1,
        c2=(p.ej1 + p.ej2) * s2,
        d=1.0 / (2.0 * f1),
        log_scale=m,
    )


def _assemble(unit, b1, b2, f2, c1, c2) -> np.ndarray:
    # entries in units of F1; unit = 1 for the state, 0 for its derivative
    r11 = (unit - b1 - b2) / 4
    r22 = (unit + b1 + b2) / 4
    r14 = -(-b1 + b2 + f2) / 4
    r23 = (-b1 + b2 - f2) / 4
    r12 = (c1 + c2) / 2
    r13 = (-c1 + c2) / 2
    return np.array(
        [
            [r11, r12, r13, r14],
            [r12, r22, r23, r13],
            [r13, r23, r22, r12],
            [r14, r13, r12, r11],
        ],
        dtype=complex,
    )


def thermal_state_closed_form(p: SensorParams, t) -> np.ndarray:
    """Thermal state from the analytic symmetric-point matrix elements."""
    e = closed_form_elements(p, t)
    return _assemble(1.0, e.b1 / e.f1, e.b2 / e.f1, e.f2 / e.f1, e.c1 / e.f1, e.c2 / e.f1)


def thermal_state_derivative(p: SensorParams, t) -> np.ndarray:
    """Analytic ``d rho / dT`` of the closed-form thermal state.

    Uses ``dA_i/dT = -R_i / (4 T^2)``, hence ``d cosh(A_i)/dT = -R_i^2 / (4T^2) *
    sinh(A_i)/R_i`` and ``d (sinh(A_i)/R_i)/dT = -cosh(A_i) / (4 T^2)``.
    """
    _require_symmetric(p)
    t = thermal_point(t)
    temp = t.temperature
    if math.isinf(temp):
        return np.zeros((4, 4), dtype=complex)
    r1, r2 = p.r1, p.r2
    m = max(r1, r2) / (4.0 * temp)
    ch1, s1 = _scaled_hyperbolics(r1, temp, m)
    ch2, s2 = _scaled_hyperbolics(r2, temp, m)
    k = 1.0 / (4.0 * temp * temp)
    dch1, dch2 = -k * r1 * r1 * s1, -k * r2 * r2 * s2
    ds1, ds2 = -k * ch1, -k * ch2

    f1, df1 = ch1 + ch2, dch1 + dch2

    def ratio_derivative(x, dx):
        return (dx * f1 - x * df1) / (f1 * f1)

    return _assemble(
        0.0,
        ratio_derivative(p.em * s1, p.em * ds1),
        ratio_derivative(p.em * s2, p.em * ds2),
        ratio_derivative(ch1 - ch2, dch1 - dch2),
        ratio_derivative((p.ej1 - p.ej2) * s1, (p.ej1 - p.ej2) * ds1),
        ratio_derivative((p.ej1 + p.ej2) * s2, (p.ej1 + p.ej2) * ds2),
    )


def trace_out_second_qubit(m: np.ndarray) -> np.ndarray:
    """Partial trace over qubit 2 of a 4x4 operator (index ``n1 + 2 * n2``)."""
    m = np.asarray(m)
    return m[:2, :2] + m[2:, 2:]
