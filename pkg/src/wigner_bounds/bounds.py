"""Quantum and classical bounds of the Wigner parameter.

Quantum bounds are the extreme eigenvalues of the Wigner operator (any state
gives an expectation value between them, and the eigenvectors attain them).
Classical bounds come from enumerating the sixteen deterministic local
strategies; every local-realistic model is a mixture of these.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Mapping, NamedTuple

import numpy as np

from .errors import DomainError
from .kernel import eigen_hermitian
from .search import Extremum, parallel_map, refine_grid_extrema
from .states import BasisSign
from .wigner import FilippSvozil, General, WignerParametrization, wigner_operator

__all__ = [
    "ClassicalBounds",
    "ExtremaReport",
    "LhvStrategy",
    "QuantumBounds",
    "all_strategies",
    "classical_enumeration",
    "lhv_mixture_value",
    "point_extrema",
    "quantum_bounds",
    "scan_general_extrema",
    "scan_quantum_extrema",
    "strategy_value",
]

EXTREMUM_TOL = 1e-6
REFINE_TOL = 1e-10
MIXTURE_SUM_TOL = 1e-12

PLUS, MINUS = BasisSign.PLUS, BasisSign.MINUS


@dataclass(frozen=True)
class QuantumBounds:
    lambda_min: float
    lambda_max: float
    state_min: np.ndarray
    state_max: np.ndarray
    parametrization: WignerParametrization
    eigenvalues: np.ndarray = field(repr=False)


def quantum_bounds(p: WignerParametrization) -> QuantumBounds:
    """Smallest and largest eigenvalue of the Wigner operator with their eigenstates."""
    eig = eigen_hermitian(wigner_operator(p))
    return QuantumBounds(
        lambda_min=float(eig.eigenvalues[0]),
        lambda_max=float(eig.eigenvalues[-1]),
        state_min=eig.vector(0).copy(),
        state_max=eig.vector(-1).copy(),
        parametrization=p,
        eigenvalues=eig.eigenvalues,
    )


class LhvStrategy(NamedTuple):
    """Predetermined outcomes: Alice at -theta (x1) and 0 (x2), Bob at 0 (y2) and theta (y3)."""

    x1: BasisSign
    x2: BasisSign
    y2: BasisSign
    y3: BasisSign

    def __str__(self):
        return "".join(s.value for s in self)


def all_strategies() -> list[LhvStrategy]:
    return [LhvStrategy(*s) for s in itertools.product((PLUS, MINUS), repeat=4)]


def strategy_value(s: LhvStrategy) -> int:
    """W of a deterministic strategy, in exact integer arithmetic."""
    x1, x2, y2, y3 = (int(v is PLUS) for v in s)
    return x1 * y2 + x2 * y3 + (1 - x2) * (1 - y2) - x1 * y3


_STRATEGIES = all_strategies()
_STRATEGY_SET = frozenset(_STRATEGIES)
_STRATEGY_VALUES = [strategy_value(s) for s in _STRATEGIES]


@dataclass(frozen=True)
class ClassicalBounds:
    w_min: int
    w_max: int
    per_strategy: dict


def classical_enumeration() -> ClassicalBounds:
    values = {s: strategy_value(s) for s in all_strategies()}
    return ClassicalBounds(min(values.values()), max(values.values()), values)


def lhv_mixture_value(weights) -> float:
    """W of a local hidden-variable model given as a distribution over strategies.

    ``weights`` is a mapping from :class:`LhvStrategy` to probability (absent
    strategies weigh zero) or a length-16 sequence in :func:`all_strategies`
    order.
    """
    if isinstance(weights, Mapping):
        unknown = [k for k in weights if k not in _STRATEGY_SET]
        if unknown:
            raise DomainError(f"not a strategy: {unknown[0]!r}")
        w = [float(weights.get(s, 0.0)) for s in _STRATEGIES]
    else:
        w = [float(x) for x in weights]
        if len(w) != len(_STRATEGIES):
            raise DomainError(f"expected {len(_STRATEGIES)} weights, got {len(w)}")
    if any(not math.isfinite(x) or x < 0.0 for x in w):
        raise DomainError("weights must be finite and non-negative")
    total = math.fsum(w)
    if abs(total - 1.0) > MIXTURE_SUM_TOL:
        raise DomainError(f"weights sum to {total!r}, expected 1")
    return math.fsum(x * v for x, v in zip(w, _STRATEGY_VALUES))


@dataclass(frozen=True)
class ExtremaReport:
    """Outcome of a grid scan of the quantum bounds.

    ``argmin``/``argmax`` hold every refined point whose value lies within
    1e-6 of the global extreme.  ``axes`` and the two ``*_grid`` arrays keep the
    raw (unrefined) grid so callers can emit the bound curves.
    """

    grid_spec: dict
    global_min: Extremum
    global_max: Extremum
    argmin: list
    argmax: list
    axes: tuple = field(repr=False)
    lambda_min_grid: np.ndarray = field(repr=False)
    lambda_max_grid: np.ndarray = field(repr=False)


def _extreme_eigenvalues(p):
    ev = eigen_hermitian(wigner_operator(p)).eigenvalues
    return ev[0], ev[-1]


def _check_range(lo, hi, steps, name):
    if not (math.isfinite(lo) and math.isfinite(hi)) or not lo < hi:
        raise DomainError(f"{name} range must satisfy min < max, got [{lo}, {hi}]")
    if int(steps) != steps or steps < 2:
        raise DomainError(f"{name} steps must be an integer >= 2, got {steps!r}")


def _report(grid_spec, axes, lmin, lmax, f_min, f_max, refine_tolerance):
    argmin = refine_grid_extrema(f_min, axes, lmin, maximize=False, tol=refine_tolerance,
                                 keep_within=EXTREMUM_TOL)
    argmax = refine_grid_extrema(f_max, axes, lmax, maximize=True, tol=refine_tolerance,
                                 keep_within=EXTREMUM_TOL)
    gmin = min(argmin, key=lambda e: e.value)
    gmax = max(argmax, key=lambda e: e.value)
    return ExtremaReport(grid_spec, gmin, gmax, argmin, argmax, axes, lmin, lmax)


def scan_quantum_extrema(theta_min, theta_max, steps, refine_tolerance=REFINE_TOL) -> ExtremaReport:
    """Scan the one-angle operator over ``steps`` equally spaced angles and refine the extrema."""
    _check_range(theta_min, theta_max, steps, "theta")
    thetas = np.linspace(theta_min, theta_max, int(steps))
    pairs = np.array(parallel_map(lambda t: _extreme_eigenvalues(FilippSvozil(float(t))), thetas))
    spec = {"parametrization": "fs", "theta_min": float(theta_min), "theta_max": float(theta_max),
            "steps": int(steps), "refine_tolerance": refine_tolerance}
    return _report(
        spec, (thetas,), pairs[:, 0], pairs[:, 1],
        lambda t: _extreme_eigenvalues(FilippSvozil(t))[0],
        lambda t: _extreme_eigenvalues(FilippSvozil(t))[1],
        refine_tolerance,
    )


def scan_general_extrema(alpha_range, beta_range, steps, refine_tolerance=REFINE_TOL) -> ExtremaReport:
    """Two-angle scan; ``steps`` is an int (both axes) or an ``(alpha_steps, beta_steps)`` pair."""
    a_steps, b_steps = (steps, steps) if np.isscalar(steps) else steps
    _check_range(*alpha_range, a_steps, "alpha")
    _check_range(*beta_range, b_steps, "beta")
    alphas = np.linspace(*alpha_range, int(a_steps))
    betas = np.linspace(*beta_range, int(b_steps))
    cells = [(float(a), float(b)) for a in alphas for b in betas]
    pairs = np.array(parallel_map(lambda ab: _extreme_eigenvalues(General(*ab)), cells))
    shape = (len(alphas), len(betas))
    spec = {"parametrization": "general",
            "alpha_min": float(alpha_range[0]), "alpha_max": float(alpha_range[1]),
            "beta_min": float(beta_range[0]), "beta_max": float(beta_range[1]),
            "steps": [int(a_steps), int(b_steps)], "refine_tolerance": refine_tolerance}
    return _report(
        spec, (alphas, betas), pairs[:, 0].reshape(shape), pairs[:, 1].reshape(shape),
        lambda a, b: _extreme_eigenvalues(General(a, b))[0],
        lambda a, b: _extreme_eigenvalues(General(a, b))[1],
        refine_tolerance,
    )


def point_extrema(p: WignerParametrization) -> ExtremaReport:
    """Degenerate one-point report, for emitting the bounds at a single setting."""
    qb = quantum_bounds(p)
    if isinstance(p, FilippSvozil):
        params = (float(p.theta),)
        spec = {"parametrization": "fs", "theta_min": params[0], "theta_max": params[0], "steps": 1}
        lmin, lmax = np.array([qb.lambda_min]), np.array([qb.lambda_max])
    else:
        params = (float(p.alpha), float(p.beta))
        spec = {"parametrization": "general", "alpha_min": params[0], "alpha_max": params[0],
                "beta_min": params[1], "beta_max": params[1], "steps": [1, 1]}
        lmin, lmax = np.array([[qb.lambda_min]]), np.array([[qb.lambda_max]])
    axes = tuple(np.array([x]) for x in params)
    lo, hi = Extremum(params, qb.lambda_min), Extremum(params, qb.lambda_max)
    return ExtremaReport(spec, lo, hi, [lo], [hi], axes, lmin, lmax)
