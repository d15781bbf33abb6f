"""Small dense complex linear algebra for one- and two-qubit problems.

Vectors and operators are plain numpy arrays of dtype complex128.  Two-qubit
objects use the A-major ordering ``|HH>, |HV>, |VH>, |VV>`` so that
``np.kron(a, b)`` places subsystem A on the left.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError, InvalidDimensionError, NumericalConsistencyError

__all__ = [
    "EigenDecomposition",
    "as_hermitian",
    "as_ket",
    "eigen_hermitian",
    "tensor_product",
    "trace_product",
]

HERMITIAN_TOL = 1e-12
NORM_TOL = 1e-12
TRACE_IMAG_TOL = 1e-10

JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100
DEGENERACY_TOL = 1e-9

_DIMS = (2, 4)


def _check_finite(x, what):
    if not np.all(np.isfinite(x)):
        raise DomainError(f"{what} contains NaN or Inf")


def as_ket(v, dim=None, normalized=False) -> np.ndarray:
    """Validate a 2- or 4-component complex vector and return it as complex128."""
    v = np.asarray(v, dtype=np.complex128)
    if v.ndim != 1 or v.shape[0] not in _DIMS:
        raise InvalidDimensionError(f"expected a vector of length 2 or 4, got shape {v.shape}")
    if dim is not None and v.shape[0] != dim:
        raise InvalidDimensionError(f"expected a vector of length {dim}, got {v.shape[0]}")
    _check_finite(v, "vector")
    if normalized:
        norm2 = float(np.vdot(v, v).real)
        if abs(norm2 - 1.0) > NORM_TOL:
            raise DomainError(f"vector is not normalized (norm^2 = {norm2!r})")
    return v


def as_hermitian(a, dim=None, tol=HERMITIAN_TOL) -> np.ndarray:
    """Validate a 2x2 or 4x4 Hermitian matrix and return it as complex128."""
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] not in _DIMS:
        raise InvalidDimensionError(f"expected a 2x2 or 4x4 matrix, got shape {a.shape}")
    if dim is not None and a.shape[0] != dim:
        raise InvalidDimensionError(f"expected a {dim}x{dim} matrix, got {a.shape[0]}x{a.shape[0]}")
    _check_finite(a, "matrix")
    err = np.max(np.abs(a - a.conj().T))
    if err > tol:
        raise DomainError(f"matrix is not Hermitian (max asymmetry {err:.3e})")
    return a


def tensor_product(a, b) -> np.ndarray:
    """Kronecker product of two single-qubit operators, A index major."""
    a = as_hermitian(a, dim=2)
    b = as_hermitian(b, dim=2)
    # same layout as np.kron(a, b) without its generic-shape overhead
    return (a[:, None, :, None] * b[None, :, None, :]).reshape(4, 4)


def trace_product(a, rho) -> float:
    """Return Tr(a @ rho) for two-qubit operators.

    The trace of a product of Hermitian matrices is real; an imaginary residue
    of 1e-10 or more means one of the inputs was not what it claimed to be.
    """
    a = as_hermitian(a, dim=4)
    rho = as_hermitian(rho, dim=4)
    t = np.einsum("ij,ji->", a, rho)
    if abs(t.imag) >= TRACE_IMAG_TOL:
        raise NumericalConsistencyError(f"trace has imaginary residue {t.imag:.3e}")
    return float(t.real)


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues in ascending order; ``eigenvectors[:, i]`` belongs to ``eigenvalues[i]``."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def vector(self, i) -> np.ndarray:
        return self.eigenvectors[:, i]

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def _off_norm(a):
    # summed directly; subtracting the diagonal from the total cancels catastrophically
    return float(np.linalg.norm(a[~np.eye(a.shape[0], dtype=bool)]))


def _jacobi_rotation(a, p, q):
    """Unitary U that annihilates a[p, q] under a -> U^H a U."""
    apq = a[p, q]
    mag = abs(apq)
    phase = apq / mag
    tau = (a[q, q].real - a[p, p].real) / (2.0 * mag)
    if abs(tau) > 1e150:
        t = 0.5 / tau
    else:
        t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + math.sqrt(1.0 + tau * tau))
    c = 1.0 / math.sqrt(1.0 + t * t)
    s = t * c
    # complex phase on q first makes a[p, q] real, then a real Givens rotation
    d = phase.conjugate()
    u = np.eye(a.shape[0], dtype=np.complex128)
    u[p, p] = c
    u[p, q] = s
    u[q, p] = -s * d
    u[q, q] = c * d
    return u


def _orthonormalize_clusters(values, vectors):
    n = len(values)
    start = 0
    while start < n:
        stop = start + 1
        while stop < n and values[stop] - values[stop - 1] < DEGENERACY_TOL:
            stop += 1
        if stop - start > 1:
            for i in range(start, stop):
                v = vectors[:, i].copy()
                for j in range(start, i):
                    u = vectors[:, j]
                    v -= np.vdot(u, v) * u
                vectors[:, i] = v / np.linalg.norm(v)
        start = stop


def _fix_phases(vectors):
    for i in range(vectors.shape[1]):
        v = vectors[:, i]
        mags = np.abs(v)
        k = int(np.argmax(mags >= mags.max() - 1e-12))
        vectors[:, i] = v * (v[k].conjugate() / mags[k])


def eigen_hermitian(a, tol=JACOBI_TOL, max_sweeps=JACOBI_MAX_SWEEPS) -> EigenDecomposition:
    """Full eigendecomposition of a small Hermitian matrix by cyclic Jacobi sweeps.

    Sweeps stop once the off-diagonal Frobenius norm drops below
    ``tol * max(1, ||a||_F)``.  Eigenvalues that agree within 1e-9 form a
    cluster whose eigenvectors are re-orthonormalized (Gram-Schmidt, sorted
    order).  Each eigenvector is rotated so that its first component of
    largest magnitude is real and non-negative.

    Raises ConvergenceError if the sweep budget runs out.
    """
    a = as_hermitian(a).copy()
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    threshold = tol * max(1.0, float(np.linalg.norm(a)))
    off = _off_norm(a)
    sweeps = 0
    while off >= threshold:
        if sweeps == max_sweeps:
            raise ConvergenceError(f"Jacobi eigensolver did not converge in {max_sweeps} sweeps", off)
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) < 1e-300:
                    continue
                u = _jacobi_rotation(a, p, q)
                a = u.conj().T @ a @ u
                a[p, q] = a[q, p] = 0.0
                v = v @ u
        sweeps += 1
        off = _off_norm(a)

    values = np.diag(a).real.copy()
    order = np.argsort(values, kind="stable")
    values = values[order]
    vectors = v[:, order].copy()
    _orthonormalize_clusters(values, vectors)
    _fix_phases(vectors)
    return EigenDecomposition(values, vectors)
