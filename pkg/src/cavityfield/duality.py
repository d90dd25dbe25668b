"""Duality (chiral) rotation of cavity fields.

The rotation mixes the normalized fields ``sqrt(eps0) E`` and
``sqrt(mu0) H``:

    E' = E cos(theta) + H sin(theta)
    H' = H cos(theta) - E sin(theta)

which is the textbook form in natural units.  ``theta = pi/2`` gives
``(E, H) -> (H, -E)``.

Two views are provided.  :func:`duality_rotate` rotates the scalar
``(E_x, H_y)`` samples of a snapshot and keeps them labelled as ``x`` and
``y`` components.  That map does *not* preserve the standard Maxwell pair
of the 1D diagnostic: a quarter turn lands the first family on the
sign-flipped pair.  :func:`rotate_transverse` rotates the full vectors, so
``E_x`` feeds ``E_y`` and ``H_y`` feeds ``H_x``; the free Maxwell system is
closed under that map, which :func:`transverse_residuals` checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import trapezoid

from .classical import FieldSnapshot, ResidualReport, discrete_l2, field_energy, maxwell_residuals
from .modes import CavityConfig, ZGrid

TWO_PI = 2 * math.pi


def canonical_angle(theta: float) -> float:
    """Map a finite angle into [0, 2*pi)."""
    theta = float(theta)
    if not math.isfinite(theta):
        raise ValueError(f"duality angle must be finite, got {theta}")
    theta = math.fmod(theta, TWO_PI)
    if theta < 0:
        theta += TWO_PI
    # fmod of a value just below zero can round up to exactly 2*pi
    return 0.0 if theta >= TWO_PI else theta


# quarter turns get exact cos/sin so that pi/2 is a pure relabelling
_QUARTER_TURNS = {0.0: (1.0, 0.0), math.pi / 2: (0.0, 1.0), math.pi: (-1.0, 0.0), 3 * math.pi / 2: (0.0, -1.0)}


def _rotation(theta: float) -> tuple[float, float]:
    theta = canonical_angle(theta)
    if theta in _QUARTER_TURNS:
        return _QUARTER_TURNS[theta]
    return math.cos(theta), math.sin(theta)


def duality_rotate(snapshot: FieldSnapshot, theta: float, cfg: CavityConfig) -> FieldSnapshot:
    """Rotate the ``(E_x, H_y)`` samples of ``snapshot`` by ``theta``."""
    c, s = _rotation(theta)
    se, sm = math.sqrt(cfg.epsilon0), math.sqrt(cfg.mu0)
    e = se * snapshot.E_x
    h = sm * snapshot.H_y
    return FieldSnapshot(snapshot.grid, (e * c + h * s) / se, (h * c - e * s) / sm, snapshot.t)


@dataclass(frozen=True)
class TransverseSnapshot:
    """Both transverse polarizations of a z-dependent field."""

    grid: ZGrid
    E_x: np.ndarray
    E_y: np.ndarray
    H_x: np.ndarray
    H_y: np.ndarray
    t: float

    @classmethod
    def from_snapshot(cls, snap: FieldSnapshot) -> "TransverseSnapshot":
        zero = np.zeros_like(snap.E_x)
        return cls(snap.grid, snap.E_x, zero, zero, snap.H_y, snap.t)


def rotate_transverse(snapshot: FieldSnapshot | TransverseSnapshot, theta: float, cfg: CavityConfig) -> TransverseSnapshot:
    """Vector duality rotation: ``E' = E cos + H sin``, ``H' = H cos - E sin``."""
    if isinstance(snapshot, FieldSnapshot):
        snapshot = TransverseSnapshot.from_snapshot(snapshot)
    c, s = _rotation(theta)
    se, sm = math.sqrt(cfg.epsilon0), math.sqrt(cfg.mu0)
    ex, ey = se * snapshot.E_x, se * snapshot.E_y
    hx, hy = sm * snapshot.H_x, sm * snapshot.H_y
    return TransverseSnapshot(
        snapshot.grid,
        (ex * c + hx * s) / se,
        (ey * c + hy * s) / se,
        (hx * c - ex * s) / sm,
        (hy * c - ey * s) / sm,
        snapshot.t,
    )


@dataclass(frozen=True)
class TransverseResiduals:
    """L2 norms of the full vector Ampere and Faraday residuals."""

    ampere: float
    faraday: float
    dz: float
    dt: float


def transverse_residuals(source: Callable[[float], TransverseSnapshot], cfg: CavityConfig, t: float, dt: float) -> TransverseResiduals:
    """Vector Maxwell residuals for fields depending on ``z`` only.

    Components: ``eps0 dEx/dt + dHy/dz``, ``eps0 dEy/dt - dHx/dz`` (Ampere)
    and ``dEx/dz + mu0 dHy/dt``, ``-dEy/dz + mu0 dHx/dt`` (Faraday).
    """
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    before, now, after = source(t - dt), source(t), source(t + dt)
    dz = now.grid.dz

    def d_dt(name):
        return (getattr(after, name)[1:-1] - getattr(before, name)[1:-1]) / (2 * dt)

    def d_dz(name):
        values = getattr(now, name)
        return (values[2:] - values[:-2]) / (2 * dz)

    amp_x = cfg.epsilon0 * d_dt("E_x") + d_dz("H_y")
    amp_y = cfg.epsilon0 * d_dt("E_y") - d_dz("H_x")
    far_y = d_dz("E_x") + cfg.mu0 * d_dt("H_y")
    far_x = -d_dz("E_y") + cfg.mu0 * d_dt("H_x")
    ampere = math.hypot(discrete_l2(amp_x, dz), discrete_l2(amp_y, dz))
    faraday = math.hypot(discrete_l2(far_x, dz), discrete_l2(far_y, dz))
    return TransverseResiduals(ampere, faraday, dz, float(dt))


def transverse_energy(snapshot: TransverseSnapshot, cfg: CavityConfig) -> float:
    density = cfg.epsilon0 * (np.abs(snapshot.E_x) ** 2 + np.abs(snapshot.E_y) ** 2) \
        + cfg.mu0 * (np.abs(snapshot.H_x) ** 2 + np.abs(snapshot.H_y) ** 2)
    return 0.5 * (cfg.V / cfg.L) * float(trapezoid(density, dx=snapshot.grid.dz))


@dataclass(frozen=True)
class InvarianceReport:
    theta: float
    energy_before: float
    energy_after: float
    residuals_before: ResidualReport
    residuals_after: ResidualReport
    transverse_before: TransverseResiduals
    transverse_after: TransverseResiduals

    @property
    def energy_drift(self) -> float:
        return abs(self.energy_after - self.energy_before) / max(self.energy_before, 1e-300)


def invariance_report(snapshot_fn: Callable[[float], FieldSnapshot], theta: float, cfg: CavityConfig,
                      t: float, dt: float) -> InvarianceReport:
    """Energy and residuals before and after a duality rotation.

    ``residuals_*`` use the scalar ``(E_x, H_y)`` diagnostic on the rotated
    samples; ``transverse_*`` track the rotated vector field.
    """
    theta = canonical_angle(theta)
    rotated = lambda tt: duality_rotate(snapshot_fn(tt), theta, cfg)
    plain_t = lambda tt: TransverseSnapshot.from_snapshot(snapshot_fn(tt))
    rotated_t = lambda tt: rotate_transverse(snapshot_fn(tt), theta, cfg)
    now = snapshot_fn(t)
    return InvarianceReport(
        theta=theta,
        energy_before=field_energy(now, cfg),
        energy_after=field_energy(duality_rotate(now, theta, cfg), cfg),
        residuals_before=maxwell_residuals(snapshot_fn, cfg, t, dt),
        residuals_after=maxwell_residuals(rotated, cfg, t, dt),
        transverse_before=transverse_residuals(plain_t, cfg, t, dt),
        transverse_after=transverse_residuals(rotated_t, cfg, t, dt),
    )


def duality_scan(snapshot_fn: Callable[[float], FieldSnapshot], cfg: CavityConfig, t: float, dt: float,
                 n_angles: int) -> list[dict]:
    """Rows at ``theta = 2 pi j / n_angles`` with energy and scalar residuals."""
    if n_angles < 1:
        raise ValueError(f"n_angles must be at least 1, got {n_angles}")
    rows = []
    for j in range(n_angles):
        theta = TWO_PI * j / n_angles
        rotated = lambda tt, th=theta: duality_rotate(snapshot_fn(tt), th, cfg)
        res = maxwell_residuals(rotated, cfg, t, dt)
        rows.append({
            "theta": theta,
            "energy": field_energy(rotated(t), cfg),
            "ampere_std": res.ampere_standard,
            "faraday_std": res.faraday_standard,
            "ampere_dual": res.ampere_dual,
            "faraday_dual": res.faraday_dual,
        })
    return rows
