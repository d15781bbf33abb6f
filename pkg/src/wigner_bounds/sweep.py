"""(theta, xi) grids of W for the phi(xi) family, and their envelope check."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds import quantum_bounds
from .errors import ConfigError
from .search import parallel_map
from .states import density_from_pure, phi_xi_state, white_noise_mix
from .wigner import FilippSvozil, wigner_values

__all__ = ["SweepConfig", "SweepGrid", "EnvelopeCheck", "check_envelope", "run_sweep"]

ENVELOPE_TOL = 1e-9


@dataclass(frozen=True)
class SweepConfig:
    theta_min: float = 0.0
    theta_max: float = math.pi
    theta_steps: int = 200
    xi_min: float = 0.0
    xi_max: float = math.pi
    xi_steps: int = 200
    visibility: float = 1.0

    def validate(self):
        for name in ("theta_min", "theta_max", "xi_min", "xi_max", "visibility"):
            if not math.isfinite(getattr(self, name)):
                raise ConfigError(name, "must be finite")
        for name in ("theta_steps", "xi_steps"):
            n = getattr(self, name)
            if int(n) != n or n < 2:
                raise ConfigError(name, f"must be an integer >= 2, got {n!r}")
        if not self.theta_min < self.theta_max:
            raise ConfigError("theta_max", "must exceed theta_min")
        if not self.xi_min < self.xi_max:
            raise ConfigError("xi_max", "must exceed xi_min")
        if not 0.0 <= self.visibility <= 1.0:
            raise ConfigError("visibility", f"must lie in [0, 1], got {self.visibility!r}")
        return self


@dataclass(frozen=True)
class SweepGrid:
    """Flat theta-major rows: ``theta[k], xi[k], w[k]``."""

    theta: np.ndarray
    xi: np.ndarray
    w: np.ndarray

    def rows(self):
        return list(zip(self.theta.tolist(), self.xi.tolist(), self.w.tolist()))

    def __len__(self):
        return len(self.w)


def run_sweep(cfg: SweepConfig) -> SweepGrid:
    cfg.validate()
    thetas = np.linspace(cfg.theta_min, cfg.theta_max, int(cfg.theta_steps))
    xis = np.linspace(cfg.xi_min, cfg.xi_max, int(cfg.xi_steps))
    rhos = np.array([white_noise_mix(density_from_pure(phi_xi_state(float(x))), cfg.visibility)
                     for x in xis])
    w = parallel_map(lambda t: wigner_values(FilippSvozil(float(t)), rhos), thetas)
    return SweepGrid(np.repeat(thetas, len(xis)), np.tile(xis, len(thetas)), np.concatenate(w))


@dataclass(frozen=True)
class EnvelopeCheck:
    rows: int
    outside: list
    below_classical: int
    above_classical: int

    @property
    def ok(self):
        return not self.outside


def check_envelope(grid: SweepGrid, tol=ENVELOPE_TOL) -> EnvelopeCheck:
    """Check every row against the eigenvalue window at its theta.

    Also counts rows violating the classical window ``0 <= W <= 1``.
    """
    cache = {}
    outside = []
    for theta, xi, w in grid.rows():
        if theta not in cache:
            qb = quantum_bounds(FilippSvozil(theta))
            cache[theta] = (qb.lambda_min, qb.lambda_max)
        lo, hi = cache[theta]
        if not lo - tol <= w <= hi + tol:
            outside.append((theta, xi, w, lo, hi))
    w = np.asarray(grid.w)
    return EnvelopeCheck(len(w), outside, int(np.sum(w < -tol)), int(np.sum(w > 1.0 + tol)))
