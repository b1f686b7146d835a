"""Small dense Hermitian linear algebra (2x2 and 4x4).

Matrices are plain ``numpy`` arrays of dtype ``complex128``.  The eigensolver is
a cyclic complex Jacobi iteration: for the tiny dimensions used here it is
deterministic, accurate to round-off and needs no LAPACK call.
"""
from __future__ import annotations

import math
from typing import Callable, NamedTuple

import numpy as np

from .errors import DomainError, InvalidState, NoConvergence, NotHermitian, SizeOverflow

HERMITIAN_ATOL = 1e-12
JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100
MAX_DIM = 4


class Eigensystem(NamedTuple):
    """Ascending eigenvalues and matching orthonormal eigenvectors.

    ``vectors[:, k]`` is the eigenvector of ``values[k]``.
    """

    values: np.ndarray
    vectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.vectors * self.values) @ self.vectors.conj().T

    def projector(self, k: int) -> np.ndarray:
        v = self.vectors[:, k]
        return np.outer(v, v.conj())


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.transpose(m))


def is_hermitian(m, atol: float = HERMITIAN_ATOL) -> bool:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return bool(np.all(np.abs(m - dagger(m)) <= atol))


def as_hermitian(m, atol: float = HERMITIAN_ATOL) -> np.ndarray:
    """Validate ``m`` as Hermitian and return a symmetrized complex copy."""
    m = np.array(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NotHermitian(f"expected a square matrix, got shape {m.shape}")
    if m.shape[0] > MAX_DIM:
        raise SizeOverflow(f"dimension {m.shape[0]} exceeds {MAX_DIM}")
    dev = float(np.max(np.abs(m - dagger(m)))) if m.size else 0.0
    if not dev <= atol:
        raise NotHermitian(f"max |M - M^dagger| = {dev:.3e} exceeds {atol:.1e}")
    return 0.5 * (m + dagger(m))


def _off_norm(a: list) -> float:
    n = len(a)
    total = 0.0
    for i in range(n):
        row = a[i]
        for j in range(n):
            if i != j:
                z = row[j]
                total += z.real * z.real + z.imag * z.imag
    return math.sqrt(total)


def _fix_phase(vectors: np.ndarray) -> np.ndarray:
    # largest-magnitude entry of each column made real positive
    out = vectors.copy()
    for k in range(out.shape[1]):
        col = out[:, k]
        j = int(np.argmax(np.abs(col)))
        out[:, k] = col * (abs(col[j]) / col[j])
    return out


def hermitian_eig(
    m, *, tol: float = JACOBI_TOL, max_sweeps: int = JACOBI_MAX_SWEEPS
) -> Eigensystem:
    """Diagonalize a Hermitian matrix with cyclic complex Jacobi rotations.

    Each rotation first removes the phase of the pivot ``a[p, q]`` and then
    applies the real symmetric Jacobi rotation to the resulting real pivot.
    Iteration stops once the off-diagonal Frobenius norm is at most
    ``tol * max(1, ||M||_F)``.

    Raises:
        NotHermitian: ``m`` is not Hermitian within 1e-12.
        NoConvergence: tolerance not reached after ``max_sweeps`` sweeps.
    """
    herm = as_hermitian(m)
    n = herm.shape[0]
    # plain Python scalars: numpy call overhead dominates at n <= 4
    a = herm.tolist()
    v = [[complex(i == j) for j in range(n)] for i in range(n)]
    threshold = tol * max(1.0, float(np.linalg.norm(herm)))
    pairs = [(p, q) for p in range(n - 1) for q in range(p + 1, n)]

    for _ in range(max_sweeps):
        if _off_norm(a) <= threshold:
            break
        for p, q in pairs:
            apq = a[p][q]
            mag = abs(apq)
            if mag == 0.0:
                continue
            w = apq.conjugate() / mag
            zeta = (a[q][q].real - a[p][p].real) / (2.0 * mag)
            t = (1.0 if zeta >= 0 else -1.0) / (abs(zeta) + math.hypot(1.0, zeta))
            c = 1.0 / math.sqrt(1.0 + t * t)
            s = t * c
            # A <- A J with J = [[c, s], [-s w, c w]] on columns (p, q)
            sw, cw = s * w, c * w
            for row in a:
                x, y = row[p], row[q]
                row[p] = c * x - sw * y
                row[q] = s * x + cw * y
            for row in v:
                x, y = row[p], row[q]
                row[p] = c * x - sw * y
                row[q] = s * x + cw * y
            # A <- J^dagger A on rows (p, q)
            swc, cwc = sw.conjugate(), cw.conjugate()
            rp, rq = a[p], a[q]
            for j in range(n):
                x, y = rp[j], rq[j]
                rp[j] = c * x - swc * y
                rq[j] = s * x + cwc * y
            rp[q] = rq[p] = 0j
            rp[p] = complex(rp[p].real)
            rq[q] = complex(rq[q].real)
    else:
        if _off_norm(a) > threshold:
            raise NoConvergence(
                f"off-diagonal norm {_off_norm(a):.3e} after {max_sweeps} sweeps"
            )

    values = np.array([a[i][i].real for i in range(n)])
    order = np.argsort(values, kind="stable")
    vectors = np.array(v, dtype=complex)
    return Eigensystem(values[order], _fix_phase(vectors[:, order]))


def tensor_product(a, b) -> np.ndarray:
    """Kronecker product ``out[i*dB + k, j*dB + l] = a[i, j] * b[k, l]``."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    dim = a.shape[0] * b.shape[0]
    if dim > MAX_DIM:
        raise SizeOverflow(f"tensor product dimension {dim} exceeds {MAX_DIM}")
    return np.kron(a, b)


def matrix_function(m, f: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Apply a real scalar function to a Hermitian matrix through its spectrum.

    ``f`` receives the array of eigenvalues.  Non-finite results are reported
    as :class:`DomainError`.
    """
    eig = hermitian_eig(m)
    with np.errstate(all="ignore"):
        fv = np.asarray(f(eig.values), dtype=float)
    if not np.all(np.isfinite(fv)):
        raise DomainError(f"function undefined on spectrum {eig.values}")
    out = (eig.vectors * fv) @ dagger(eig.vectors)
    return 0.5 * (out + dagger(out))


def matrix_exp(m) -> np.ndarray:
    return matrix_function(m, np.exp)


def matrix_sqrt(m, atol: float = 1e-12) -> np.ndarray:
    """Principal square root of a positive semidefinite Hermitian matrix.

    Eigenvalues in ``[-atol, 0)`` are clamped to zero.
    """

    def _sqrt(x):
        if np.any(x < -atol):
            return np.full_like(x, np.nan)
        return np.sqrt(np.clip(x, 0.0, None))

    return matrix_function(m, _sqrt)


def matrix_log(m) -> np.ndarray:
    def _log(x):
        return np.where(x > 0, np.log(np.where(x > 0, x, 1.0)), np.nan)

    return matrix_function(m, _log)


def validate_density_matrix(rho, atol: float = 1e-12) -> np.ndarray:
    """Check Hermiticity, unit trace and positivity; return the symmetrized matrix."""
    rho = as_hermitian(rho)
    tr = float(np.trace(rho).real)
    if abs(tr - 1.0) > atol:
        raise InvalidState(f"trace {tr!r} differs from 1 by more than {atol:.0e}")
    lowest = hermitian_eig(rho).values[0]
    if lowest < -atol:
        raise InvalidState(f"negative eigenvalue {lowest:.3e}")
    return rho
