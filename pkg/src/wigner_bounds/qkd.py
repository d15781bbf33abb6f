"""Which maximally entangled states can drive an Ekert-type key exchange built on W.

A key-generating setting must give perfectly correlated (or anticorrelated)
outcomes while each party alone sees a fair coin.  The Gamma and Delta
families are built to do exactly that at one chosen analyzer pair; this
module searches each family over the analyzer angle and the relative phase
for the strongest violation of ``0 <= W <= 1`` that remains available.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .bounds import quantum_bounds
from .errors import DomainError, NumericalConsistencyError
from .search import Extremum, parallel_map, refine_grid_extrema
from .states import BasisSign, delta_state, density_from_pure, gamma_state
from .wigner import FilippSvozil, General, joint_probability, wigner_value, wigner_values

__all__ = [
    "Family",
    "QkdAssessment",
    "SettingPair",
    "SettingTag",
    "determinism_check",
    "qkd_report",
    "qkd_violation_search",
    "settings_set",
]

TWO_PI = 2.0 * math.pi
PROB_TOL = 1e-10
CONDITIONAL_TOL = 1e-9
VIOLATION_MARGIN = 1e-9
ENVELOPE_TOL = 1e-6
QKD_SLACK = 2e-2


class SettingTag(enum.Enum):
    """The four analyzer pairs of the protocol; ``theta`` stands for the free angle."""

    MINUS_THETA_ZERO = "(-theta,0)"
    MINUS_THETA_THETA = "(-theta,theta)"
    ZERO_ZERO = "(0,0)"
    ZERO_THETA = "(0,theta)"

    def __str__(self):
        return self.value

    def resolve(self, alpha, beta):
        """Analyzer angles given Alice's rotated angle ``alpha`` and Bob's ``beta``."""
        return {
            SettingTag.MINUS_THETA_ZERO: (alpha, 0.0),
            SettingTag.MINUS_THETA_THETA: (alpha, beta),
            SettingTag.ZERO_ZERO: (0.0, 0.0),
            SettingTag.ZERO_THETA: (0.0, beta),
        }[self]

    @classmethod
    def parse(cls, s):
        if isinstance(s, cls):
            return s
        for tag in cls:
            if s in (tag.value, tag.name, tag.name.lower()):
                return tag
        raise DomainError(f"unknown setting {s!r}")


class Family(enum.Enum):
    GAMMA = "Gamma"
    DELTA = "Delta"

    def __str__(self):
        return self.value

    def state(self, alpha, beta, phase):
        return (gamma_state if self is Family.GAMMA else delta_state)(alpha, beta, phase)

    @classmethod
    def parse(cls, s):
        if isinstance(s, cls):
            return s
        for fam in cls:
            if str(s).lower() in (fam.value.lower(), fam.name.lower()):
                return fam
        raise DomainError(f"unknown family {s!r}")


class SettingPair(NamedTuple):
    tag: SettingTag
    angle_a: float
    angle_b: float


def settings_set(theta) -> list[SettingPair]:
    if not math.isfinite(theta):
        raise DomainError(f"theta must be finite, got {theta!r}")
    return [SettingPair(tag, *tag.resolve(-theta, theta)) for tag in SettingTag]


def determinism_check(state, setting) -> tuple[bool, bool]:
    """``(deterministic, marginals_random)`` for a pure two-qubit state at an analyzer pair.

    Deterministic means Bob's outcome is fixed by Alice's: every conditional
    probability is 0 or 1 within 1e-9.  Marginals are random when both parties
    see each outcome with probability 1/2 within 1e-10.
    """
    rho = density_from_pure(state)
    angles = (setting.angle_a, setting.angle_b) if isinstance(setting, SettingPair) else tuple(setting)
    signs = (BasisSign.PLUS, BasisSign.MINUS)
    p = np.array([[joint_probability(angles, sa, sb, rho) for sb in signs] for sa in signs])
    p_a, p_b = p.sum(axis=1), p.sum(axis=0)

    deterministic = True
    for i in range(2):
        if p_a[i] <= PROB_TOL:
            continue
        cond = p[i] / p_a[i]
        if not np.all((np.abs(cond) <= CONDITIONAL_TOL) | (np.abs(cond - 1.0) <= CONDITIONAL_TOL)):
            deterministic = False
    marginals_random = bool(np.all(np.abs(p_a - 0.5) <= PROB_TOL) and np.all(np.abs(p_b - 0.5) <= PROB_TOL))
    return deterministic, marginals_random


@dataclass(frozen=True)
class Violation:
    """A refined extreme of W; ``angles`` is ``(theta,)`` or ``(alpha, beta)``."""

    angles: tuple
    phase: float
    w: float

    @property
    def theta(self):
        return self.angles[0] if len(self.angles) == 1 else None


@dataclass(frozen=True)
class QkdAssessment:
    setting: SettingTag
    family: Family
    parametrization: str
    deterministic: bool
    marginals_random: bool
    best_lower_violation: Violation
    best_upper_violation: Violation
    lower_points: list = field(default_factory=list)
    upper_points: list = field(default_factory=list)

    @property
    def violates_lower(self):
        return self.best_lower_violation.w < -VIOLATION_MARGIN

    @property
    def violates_upper(self):
        return self.best_upper_violation.w > 1.0 + VIOLATION_MARGIN

    @property
    def secure(self):
        return self.deterministic and self.marginals_random and (self.violates_lower or self.violates_upper)


def _canonical(params, n_angles):
    # projectors are pi-periodic in the analyzer angle, the relative phase is 2 pi-periodic
    angles = params[:n_angles]
    if n_angles == 2:
        angles = tuple(a % math.pi for a in angles)
    return tuple(angles) + (params[n_angles] % TWO_PI,)


def _check_steps(theta_steps, phase_steps):
    for name, n in (("theta_steps", theta_steps), ("phase_steps", phase_steps)):
        if int(n) != n or n < 2:
            raise DomainError(f"{name} must be an integer >= 2, got {n!r}")


def qkd_violation_search(setting_tag, family, theta_steps=500, phase_steps=64,
                         parametrization="fs", refine_tolerance=1e-10) -> QkdAssessment:
    """Extreme W reachable by a Gamma/Delta state anchored at one of the four settings.

    With ``parametrization="fs"`` the grid runs over theta in (0, pi) and
    W is evaluated for the symmetric one-angle operator.  With ``"general"``
    the two analyzer angles are independent, each gridded with
    ``theta_steps`` points over [0, pi).  The phase axis always spans
    [0, 2 pi) with ``phase_steps`` points.  Grid extremes are refined by
    golden-section search.
    """
    tag = SettingTag.parse(setting_tag)
    fam = Family.parse(family)
    _check_steps(theta_steps, phase_steps)
    phases = np.arange(int(phase_steps)) * (TWO_PI / int(phase_steps))

    if parametrization == "fs":
        thetas = np.linspace(0.0, math.pi, int(theta_steps) + 2)[1:-1]
        angle_axes = (thetas,)
        periodic = (False, True)

        def param(theta):
            return FilippSvozil(theta), -theta, theta

    elif parametrization == "general":
        grid = np.arange(int(theta_steps)) * (math.pi / int(theta_steps))
        angle_axes = (grid, grid)
        periodic = (True, True, True)

        def param(alpha, beta):
            return General(alpha, beta), alpha, beta

    else:
        raise DomainError(f"parametrization must be 'fs' or 'general', got {parametrization!r}")

    n_angles = len(angle_axes)

    def row(angles):
        p, a, b = param(*angles)
        anchor = tag.resolve(a, b)
        states = np.array([fam.state(*anchor, ph) for ph in phases])
        return wigner_values(p, states)

    cells = list(np.ndindex(*(len(ax) for ax in angle_axes)))
    rows = parallel_map(lambda idx: row([float(ax[i]) for ax, i in zip(angle_axes, idx)]), cells)
    values = np.array(rows).reshape(tuple(len(ax) for ax in angle_axes) + (len(phases),))

    def f(*params):
        p, a, b = param(*params[:n_angles])
        state = fam.state(*tag.resolve(a, b), params[n_angles])
        return wigner_value(p, density_from_pure(state))

    axes = angle_axes + (phases,)

    def search(maximize):
        hits = refine_grid_extrema(f, axes, values, maximize=maximize, periodic=periodic,
                                   tol=refine_tolerance, keep_within=1e-6, slack=QKD_SLACK,
                                   wrap=lambda x: _canonical(x, n_angles))
        return [Violation(h.params[:n_angles], h.params[n_angles], h.value) for h in hits]

    lower = search(False)
    upper = search(True)
    best_lower = min(lower, key=lambda v: v.w)
    best_upper = max(upper, key=lambda v: v.w)

    deterministic, marginals_random = True, True
    for v in (best_lower, best_upper):
        _, a, b = param(*v.angles)
        anchor = tag.resolve(a, b)
        d, m = determinism_check(fam.state(*anchor, v.phase), anchor)
        deterministic &= d
        marginals_random &= m
        qb = quantum_bounds(param(*v.angles)[0])
        if not qb.lambda_min - ENVELOPE_TOL <= v.w <= qb.lambda_max + ENVELOPE_TOL:
            raise NumericalConsistencyError(
                f"W = {v.w!r} for {fam} at {tag} lies outside the quantum bounds "
                f"[{qb.lambda_min!r}, {qb.lambda_max!r}]")

    return QkdAssessment(tag, fam, parametrization, deterministic, marginals_random,
                         best_lower, best_upper, lower, upper)


def qkd_report(theta_steps=500, phase_steps=64, parametrization="fs") -> list[QkdAssessment]:
    """All four settings times both families, in settings order then Gamma before Delta."""
    return [qkd_violation_search(tag, fam, theta_steps, phase_steps, parametrization)
            for tag in SettingTag for fam in Family]
