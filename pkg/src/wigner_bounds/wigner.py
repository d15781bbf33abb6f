"""Projectors, the Wigner operator and the Wigner parameter W.

W is a signed sum of four joint outcome probabilities::

    W = p[alpha, 0](+,+) + p[0, beta](+,+) + p[0, 0](-,-) - p[alpha, beta](+,+)

The symmetric one-angle family uses ``alpha = -theta, beta = theta``.  Every
evaluation computes W twice, once from the joint probabilities and once as
``Tr(W_op rho)``, and refuses to return if the two disagree.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np

from .errors import DomainError, InternalConsistencyError, NumericalConsistencyError
from .kernel import as_hermitian, tensor_product, trace_product
from .states import BasisSign, rotated_state

__all__ = [
    "AnalyzerSetting",
    "FilippSvozil",
    "General",
    "WignerParametrization",
    "joint_probability",
    "parametrization_from_angles",
    "projector",
    "wigner_operator",
    "wigner_terms",
    "wigner_value",
    "wigner_values",
]

PROB_TOL = 1e-10
DUAL_PATH_TOL = 1e-10

PLUS, MINUS = BasisSign.PLUS, BasisSign.MINUS


class AnalyzerSetting(NamedTuple):
    angle_a: float
    angle_b: float


@dataclass(frozen=True)
class FilippSvozil:
    """Symmetric one-angle parametrization: Alice at (-theta, 0), Bob at (0, theta)."""

    theta: float

    @property
    def alpha(self):
        return -self.theta

    @property
    def beta(self):
        return self.theta


@dataclass(frozen=True)
class General:
    """Two free analyzer angles: Alice at (alpha, 0), Bob at (0, beta)."""

    alpha: float
    beta: float


WignerParametrization = Union[FilippSvozil, General]


def parametrization_from_angles(alpha, beta) -> General:
    return General(float(alpha), float(beta))


class Term(NamedTuple):
    coefficient: int
    setting: AnalyzerSetting
    sign_a: BasisSign
    sign_b: BasisSign


def wigner_terms(p: WignerParametrization) -> list[Term]:
    """The four (coefficient, setting, outcomes) triples that make up W."""
    a, b = float(p.alpha), float(p.beta)
    if not (np.isfinite(a) and np.isfinite(b)):
        raise DomainError(f"parametrization angles must be finite, got {p!r}")
    return [
        Term(+1, AnalyzerSetting(a, 0.0), PLUS, PLUS),
        Term(+1, AnalyzerSetting(0.0, b), PLUS, PLUS),
        Term(+1, AnalyzerSetting(0.0, 0.0), MINUS, MINUS),
        Term(-1, AnalyzerSetting(a, b), PLUS, PLUS),
    ]


def projector(theta, sign=PLUS) -> np.ndarray:
    """Rank-one projector onto ``|s_sign(theta)>``."""
    v = rotated_state(theta, sign)
    return np.outer(v, v.conj())


def wigner_operator(p: WignerParametrization) -> np.ndarray:
    op = np.zeros((4, 4), dtype=np.complex128)
    for t in wigner_terms(p):
        op += t.coefficient * tensor_product(projector(t.setting.angle_a, t.sign_a),
                                             projector(t.setting.angle_b, t.sign_b))
    return op


def _outcome_ket(setting, sign_a, sign_b):
    return np.outer(rotated_state(setting.angle_a, sign_a), rotated_state(setting.angle_b, sign_b)).ravel()


def _checked_probability(p):
    p = np.asarray(p, dtype=float)
    bad = (p < -PROB_TOL) | (p > 1.0 + PROB_TOL)
    if np.any(bad):
        raise NumericalConsistencyError(f"joint probability {p[bad].flat[0]!r} outside [0, 1]")
    return np.clip(p, 0.0, 1.0)


def joint_probability(setting, sign_a, sign_b, rho) -> float:
    """Probability that Alice finds ``sign_a`` and Bob ``sign_b`` at the given analyzer angles."""
    setting = AnalyzerSetting(*setting)
    rho = as_hermitian(rho, dim=4)
    return _probability(setting, BasisSign.parse(sign_a), BasisSign.parse(sign_b), rho)


def _probability(setting, sign_a, sign_b, rho):
    # rho already validated
    v = _outcome_ket(setting, sign_a, sign_b)
    p = np.vdot(v, rho @ v)
    if abs(p.imag) >= PROB_TOL:
        raise NumericalConsistencyError(f"joint probability has imaginary residue {p.imag:.3e}")
    return float(_checked_probability(p.real))


def wigner_value(p: WignerParametrization, rho) -> float:
    """W for density matrix ``rho``, cross-checked against ``Tr(W_op rho)``."""
    rho = as_hermitian(rho, dim=4)
    w_prob = sum(t.coefficient * _probability(t.setting, t.sign_a, t.sign_b, rho)
                 for t in wigner_terms(p))
    w_trace = trace_product(wigner_operator(p), rho)
    if abs(w_prob - w_trace) > DUAL_PATH_TOL:
        raise InternalConsistencyError(
            f"probability form {w_prob!r} and trace form {w_trace!r} of W disagree for {p!r}")
    return float(w_prob)


def wigner_values(p: WignerParametrization, states) -> np.ndarray:
    """Vectorized W for a stack of kets ``(n, 4)`` or density matrices ``(n, 4, 4)``.

    Same two routes and the same agreement check as :func:`wigner_value`.
    """
    states = np.asarray(states, dtype=np.complex128)
    if states.ndim == 2 and states.shape[1] == 4:
        rhos = np.einsum("ni,nj->nij", states, states.conj())
    elif states.ndim == 3 and states.shape[1:] == (4, 4):
        rhos = states
    else:
        raise DomainError(f"expected shape (n, 4) or (n, 4, 4), got {states.shape}")

    w_prob = np.zeros(rhos.shape[0])
    for t in wigner_terms(p):
        v = _outcome_ket(t.setting, t.sign_a, t.sign_b)
        amp = np.einsum("i,nij,j->n", v.conj(), rhos, v)
        if np.any(np.abs(amp.imag) >= PROB_TOL):
            raise NumericalConsistencyError("joint probability has an imaginary residue")
        w_prob += t.coefficient * _checked_probability(amp.real)
    tr = np.einsum("ij,nji->n", wigner_operator(p), rhos)
    if np.any(np.abs(tr.imag) >= PROB_TOL):
        raise NumericalConsistencyError("trace form of W has an imaginary residue")
    gap = np.abs(w_prob - tr.real)
    if np.any(gap > DUAL_PATH_TOL):
        raise InternalConsistencyError(
            f"probability and trace forms of W disagree by {gap.max():.3e} for {p!r}")
    return w_prob
