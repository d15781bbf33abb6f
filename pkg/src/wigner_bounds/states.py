"""Polarization kets, Bell states and the entangled state families used in the analysis.

Single-qubit basis: ``|H> = (1, 0)``, ``|V> = (0, 1)``.  Two-qubit kets are
ordered ``|HH>, |HV>, |VH>, |VV>`` with Alice (A) as the left tensor factor.
All angles are in radians.
"""

from __future__ import annotations

import enum
import math

import numpy as np

from .errors import DomainError
from .kernel import as_hermitian, as_ket, eigen_hermitian

__all__ = [
    "BasisSign",
    "bell_state",
    "check_density_matrix",
    "delta_state",
    "density_from_pure",
    "gamma_state",
    "phi_xi_state",
    "reduced_density",
    "rotated_state",
    "white_noise_mix",
]

SQRT1_2 = 1.0 / math.sqrt(2.0)
TRACE_TOL = 1e-12
PSD_TOL = 1e-10


class BasisSign(enum.Enum):
    PLUS = "+"
    MINUS = "-"

    def __str__(self):
        return self.value

    @classmethod
    def parse(cls, s):
        if isinstance(s, cls):
            return s
        try:
            return {"+": cls.PLUS, "plus": cls.PLUS, "-": cls.MINUS, "minus": cls.MINUS}[str(s).lower()]
        except KeyError:
            raise DomainError(f"unknown basis sign {s!r}") from None


def _check_angle(x, name):
    if not math.isfinite(x):
        raise DomainError(f"{name} must be finite, got {x!r}")


def rotated_state(theta, sign=BasisSign.PLUS) -> np.ndarray:
    """Return ``|s_+(theta)> = cos|H> + sin|V>`` or ``|s_-(theta)> = cos|V> - sin|H>``."""
    _check_angle(theta, "theta")
    c, s = math.cos(theta), math.sin(theta)
    if BasisSign.parse(sign) is BasisSign.PLUS:
        return np.array([c, s], dtype=np.complex128)
    return np.array([-s, c], dtype=np.complex128)


_BELL = {
    "psi_minus": np.array([0.0, SQRT1_2, -SQRT1_2, 0.0], dtype=np.complex128),
    "phi_plus": np.array([SQRT1_2, 0.0, 0.0, SQRT1_2], dtype=np.complex128),
}


def bell_state(kind) -> np.ndarray:
    """The singlet ``psi_minus = (HV - VH)/sqrt2`` or ``phi_plus = (HH + VV)/sqrt2``."""
    try:
        return _BELL[kind].copy()
    except KeyError:
        raise DomainError(f"unknown Bell state {kind!r}; expected one of {sorted(_BELL)}") from None


def phi_xi_state(xi) -> np.ndarray:
    """``cos(xi)|phi+> + sin(xi)|psi->``, the family holding the extremal eigenstates."""
    _check_angle(xi, "xi")
    return math.cos(xi) * _BELL["phi_plus"] + math.sin(xi) * _BELL["psi_minus"]


def _pair_state(alpha, beta, phase, sign_b_first):
    _check_angle(alpha, "alpha")
    _check_angle(beta, "beta")
    _check_angle(phase, "phase")
    a_plus, a_minus = rotated_state(alpha, BasisSign.PLUS), rotated_state(alpha, BasisSign.MINUS)
    b1 = rotated_state(beta, sign_b_first)
    b2 = rotated_state(beta, BasisSign.MINUS if sign_b_first is BasisSign.PLUS else BasisSign.PLUS)
    return SQRT1_2 * (np.kron(a_plus, b1) + np.exp(1j * phase) * np.kron(a_minus, b2))


def gamma_state(alpha, beta, gamma_phase) -> np.ndarray:
    """``(|s+(alpha) s+(beta)> + e^{i gamma}|s-(alpha) s-(beta)>)/sqrt2``: correlated at (alpha, beta)."""
    return _pair_state(alpha, beta, gamma_phase, BasisSign.PLUS)


def delta_state(alpha, beta, delta_phase) -> np.ndarray:
    """``(|s+(alpha) s-(beta)> + e^{i delta}|s-(alpha) s+(beta)>)/sqrt2``: anticorrelated at (alpha, beta)."""
    return _pair_state(alpha, beta, delta_phase, BasisSign.MINUS)


def density_from_pure(s) -> np.ndarray:
    s = as_ket(s, dim=4, normalized=True)
    return np.outer(s, s.conj())


def check_density_matrix(rho) -> np.ndarray:
    """Validate a two-qubit density matrix: Hermitian, unit trace, positive semidefinite."""
    rho = as_hermitian(rho, dim=4)
    tr = np.trace(rho).real
    if abs(tr - 1.0) > TRACE_TOL:
        raise DomainError(f"density matrix trace is {tr!r}, expected 1")
    lam = eigen_hermitian(rho).eigenvalues[0]
    if lam < -PSD_TOL:
        raise DomainError(f"density matrix has negative eigenvalue {lam:.3e}")
    return rho


def white_noise_mix(rho, visibility) -> np.ndarray:
    """Return ``v * rho + (1 - v) * I/4``."""
    if not 0.0 <= visibility <= 1.0:
        raise DomainError(f"visibility must lie in [0, 1], got {visibility!r}")
    rho = as_hermitian(rho, dim=4)
    return visibility * rho + (1.0 - visibility) * np.eye(4, dtype=np.complex128) / 4.0


def reduced_density(rho, keep="A") -> np.ndarray:
    """Partial trace of a two-qubit density matrix, keeping subsystem ``"A"`` or ``"B"``."""
    rho = as_hermitian(rho, dim=4).reshape(2, 2, 2, 2)
    if keep == "A":
        return np.einsum("ijkj->ik", rho)
    if keep == "B":
        return np.einsum("ijil->jl", rho)
    raise DomainError(f"keep must be 'A' or 'B', got {keep!r}")
