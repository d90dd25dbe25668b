"""Cavity geometry, physical constants and the standing-wave mode profiles.

Mode ``alpha`` of a cavity of length ``L`` has wavenumber ``k = alpha*pi/L``,
angular frequency ``nu = k*c`` and field normalization
``A = sqrt(2 nu^2 m / (V eps0))``.  The electric profile is ``sin(k z)``
and the magnetic profile ``cos(k z)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np
import scipy.constants as const

NATURAL = "natural"
SI = "SI"
UNIT_SYSTEMS = (NATURAL, SI)

# CODATA values as shipped with scipy
SI_EPSILON0 = const.epsilon_0
SI_MU0 = const.mu_0
SI_HBAR = const.hbar

# slack for points that sit on the cavity walls up to roundoff
_WALL_SLACK = 1e-12


@dataclass(frozen=True)
class CavityConfig:
    """Geometry, constants and the per-mode mass parameters of the cavity.

    ``mass`` is either one value shared by every mode or a sequence where
    ``mass[alpha - 1]`` is the parameter of mode ``alpha``.  The speed of
    light is always derived from ``mu0`` and ``epsilon0``.
    """

    L: float = math.pi
    V: float = 1.0
    epsilon0: float = 1.0
    mu0: float = 1.0
    hbar: float = 1.0
    mass: Union[float, Sequence[float]] = 1.0
    unit_system: str = NATURAL

    def __post_init__(self):
        if self.unit_system not in UNIT_SYSTEMS:
            raise ValueError(f"unit_system must be one of {UNIT_SYSTEMS}, got {self.unit_system!r}")
        for name in ("L", "V", "epsilon0", "mu0", "hbar"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be a finite positive number, got {value!r}")
        if np.ndim(self.mass) == 0:
            masses = (float(self.mass),)
        else:
            masses = tuple(float(m) for m in self.mass)
            if not masses:
                raise ValueError("mass sequence must not be empty")
            object.__setattr__(self, "mass", masses)
        if not all(math.isfinite(m) and m > 0 for m in masses):
            raise ValueError(f"all mass values must be finite and positive, got {self.mass!r}")
        if self.unit_system == NATURAL:
            for name in ("epsilon0", "mu0", "hbar"):
                if getattr(self, name) != 1.0:
                    raise ValueError(f"{name} must be exactly 1 in natural units")

    @classmethod
    def si(cls, L: float, V: float, mass=1.0) -> "CavityConfig":
        return cls(L=L, V=V, epsilon0=SI_EPSILON0, mu0=SI_MU0, hbar=SI_HBAR,
                   mass=mass, unit_system=SI)

    @property
    def c(self) -> float:
        return 1.0 / math.sqrt(self.mu0 * self.epsilon0)

    def mass_for(self, alpha: int) -> float:
        check_alpha(alpha)
        if isinstance(self.mass, tuple):
            if alpha > len(self.mass):
                raise ValueError(f"no mass parameter for mode alpha={alpha} "
                                 f"({len(self.mass)} values given)")
            return self.mass[alpha - 1]
        return float(self.mass)


@dataclass(frozen=True)
class ZGrid:
    """Uniform grid on [0, L], both walls included."""

    n_points: int
    L: float
    z_values: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if int(self.n_points) != self.n_points or self.n_points < 3:
            raise ValueError(f"grid needs at least 3 points, got {self.n_points}")
        if not (math.isfinite(self.L) and self.L > 0):
            raise ValueError(f"L must be positive, got {self.L}")
        z = np.linspace(0.0, self.L, int(self.n_points))
        z.flags.writeable = False
        object.__setattr__(self, "z_values", z)

    @classmethod
    def for_cavity(cls, cfg: CavityConfig, n_points: int) -> "ZGrid":
        return cls(n_points, cfg.L)

    @property
    def dz(self) -> float:
        return self.L / (self.n_points - 1)

    def refined(self) -> "ZGrid":
        """Grid with half the spacing, sharing every existing node."""
        return ZGrid(2 * (self.n_points - 1) + 1, self.L)


def check_alpha(alpha) -> int:
    if isinstance(alpha, bool) or int(alpha) != alpha or alpha < 1:
        raise ValueError(f"mode index alpha must be a positive integer, got {alpha!r}")
    return int(alpha)


def mode_constants(cfg: CavityConfig, alpha: int) -> tuple[float, float, float]:
    """Return ``(k, nu, A)`` for mode ``alpha``."""
    alpha = check_alpha(alpha)
    k = alpha * math.pi / cfg.L
    nu = k * cfg.c
    A = math.sqrt(2.0 * nu**2 * cfg.mass_for(alpha) / (cfg.V * cfg.epsilon0))
    return k, nu, A


def _z_samples(z, cfg: CavityConfig) -> np.ndarray:
    if isinstance(z, ZGrid):
        if not math.isclose(z.L, cfg.L, rel_tol=1e-12):
            raise ValueError(f"grid spans [0, {z.L}] but the cavity has L={cfg.L}")
        return z.z_values
    z = np.asarray(z, dtype=float)
    slack = _WALL_SLACK * cfg.L
    if np.any(z < -slack) or np.any(z > cfg.L + slack) or not np.all(np.isfinite(z)):
        raise ValueError(f"z samples must lie in [0, L] = [0, {cfg.L}]")
    return z


def electric_profile(alpha: int, z, cfg: CavityConfig) -> np.ndarray:
    """``sin(k_alpha z)`` on a ZGrid, scalar or array of positions."""
    k, _, _ = mode_constants(cfg, alpha)
    return np.sin(k * _z_samples(z, cfg))


def magnetic_profile(alpha: int, z, cfg: CavityConfig) -> np.ndarray:
    """``cos(k_alpha z)`` on a ZGrid, scalar or array of positions."""
    k, _, _ = mode_constants(cfg, alpha)
    return np.cos(k * _z_samples(z, cfg))

