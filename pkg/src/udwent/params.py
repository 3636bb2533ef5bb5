"""Parameter containers for the detector pair and its initial state."""

import math
import warnings
from dataclasses import dataclass, field, replace

import numpy as np

EULER = float(np.euler_gamma)


@dataclass(frozen=True)
class DetectorParams:
    """Single-detector physics.

    Parameters
    ----------
    gamma : float
        Damping rate, ``gamma = lambda0**2 / (8 pi)``.
    omega_r : float
        Renormalized natural frequency.
    hbar : float
        Reduced Planck constant (default 1).
    lambda_cut_0 : float
        Switch-on cutoff parameter.  Only the early-time coefficient
        formulas use it.
    lambda_cut_1 : float
        Time-resolution cutoff parameter.  The frequency integrals run up to
        ``omega_max = omega * exp(lambda_cut_1)``.
    """

    gamma: float
    omega_r: float
    hbar: float = 1.0
    lambda_cut_0: float = 20.0
    lambda_cut_1: float = 20.0

    def __post_init__(self):
        for name in ("gamma", "omega_r", "hbar"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be positive and finite, got {v}")
        if self.omega_r <= self.gamma:
            raise ValueError("underdamped regime required: omega_r > gamma")
        if not np.isfinite(self.lambda_cut_1) or not np.isfinite(self.lambda_cut_0):
            raise ValueError("cutoff parameters must be finite")

    @classmethod
    def from_omega(cls, gamma, omega, **kw):
        """Build from the oscillation frequency ``omega = sqrt(omega_r**2 - gamma**2)``."""
        return cls(gamma=gamma, omega_r=math.sqrt(omega * omega + gamma * gamma), **kw)

    @property
    def omega(self):
        return math.sqrt(self.omega_r**2 - self.gamma**2)

    @property
    def lambda0(self):
        return math.sqrt(8.0 * math.pi * self.gamma)

    @property
    def omega_max(self):
        """Sharp UV cutoff of every frequency integral."""
        return self.omega * math.exp(self.lambda_cut_1)

    def with_cutoff(self, lam):
        return replace(self, lambda_cut_0=lam, lambda_cut_1=lam)


@dataclass(frozen=True)
class PairConfig:
    """Two identical detectors a distance ``d`` apart."""

    params: DetectorParams
    d: float

    def __post_init__(self):
        if not (np.isfinite(self.d) and self.d > 0):
            raise ValueError(f"separation must be positive, got {self.d}")

    @property
    def stable(self):
        return self.params.omega_r**2 > 2.0 * self.params.gamma / self.d

    @property
    def coupling_ratio(self):
        """``2 gamma / (Omega d)``, the per-order weight of mutual influences."""
        p = self.params
        return 2.0 * p.gamma / (p.omega * self.d)

    def warn_if_unstable(self):
        if not self.stable:
            warnings.warn(
                f"d = {self.d:g} is inside the radius of instability; "
                "mode functions grow at late times",
                RuntimeWarning,
                stacklevel=3,
            )


@dataclass(frozen=True)
class InitialGaussianState:
    """Squeezed two-detector Gaussian state with minimal uncertainty.

    The position variance along ``Q_A - Q_B`` is ``alpha**2 / 2`` and the
    momentum variance along ``P_A + P_B`` is ``beta**2 / 2``.
    """

    alpha: float
    beta: float
    hbar: float = field(default=1.0)

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0):
            raise ValueError("alpha and beta must be positive")

    @property
    def chi(self):
        """``hbar**2 - alpha**2 beta**2``; zero for separable states."""
        return self.hbar**2 - (self.alpha * self.beta) ** 2

    @property
    def separable(self):
        return abs(self.chi) <= 1e-12 * self.hbar**2

    def is_ground(self, omega):
        return self.separable and abs(self.alpha**2 - self.hbar / omega) <= 1e-12 * self.hbar / omega

    @classmethod
    def ground(cls, omega, hbar=1.0):
        return cls(math.sqrt(hbar / omega), math.sqrt(hbar * omega), hbar)
