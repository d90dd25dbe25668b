"""Classical cavity fields: both solution families, Hamiltonians, residuals.

Every mode amplitude evolves in closed form,

    q(t)  = C1 exp(i nu t) + C2 exp(-i nu t)
    q'(t) = C1 exp(i nu t)/(i nu) - C2 exp(-i nu t)/(i nu) + C_prime

so nothing here is integrated numerically in time.

The *first* family builds ``E_x`` from ``q`` and ``H_y`` from ``dq/dt``; the
*second* builds ``H_y`` from the antiderivative ``q'`` and ``E_x`` from
``dq'/dt = q``.  :func:`maxwell_residuals` measures which sign pairing of
the Ampere/Faraday equations a snapshot source satisfies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.integrate import trapezoid

from .modes import CavityConfig, ZGrid, check_alpha, electric_profile, magnetic_profile, mode_constants

# relative slack used when deciding that a mode is physically real
REAL_TOL = 1e-12


@dataclass(frozen=True)
class ModeState:
    """Complex amplitudes of one cavity mode.

    ``physical=True`` asks for a real-valued amplitude and requires
    ``C2 == conj(C1)``; use :meth:`real` to build one from ``C1`` alone.
    """

    alpha: int
    C1: complex = 0j
    C2: complex = 0j
    C_prime: complex = 0j
    C_const: float = 0.0
    physical: bool = False

    def __post_init__(self):
        check_alpha(self.alpha)
        for name in ("C1", "C2", "C_prime"):
            value = complex(getattr(self, name))
            if not (math.isfinite(value.real) and math.isfinite(value.imag)):
                raise ValueError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)
        object.__setattr__(self, "C_const", float(self.C_const))
        if self.physical and not self.is_real():
            raise ValueError(f"mode alpha={self.alpha}: physical mode needs C2 = conj(C1)")

    @classmethod
    def real(cls, alpha: int, C1: complex, C_prime: float = 0.0, C_const: float = 0.0) -> "ModeState":
        C1 = complex(C1)
        return cls(alpha, C1, C1.conjugate(), complex(C_prime), C_const, physical=True)

    @classmethod
    def cosine(cls, alpha: int, amplitude: float = 1.0, **kw) -> "ModeState":
        """Mode with ``q(t) = amplitude * cos(nu t)``."""
        return cls.real(alpha, amplitude / 2, **kw)

    def is_real(self) -> bool:
        scale = max(abs(self.C1), abs(self.C2), 1e-300)
        return abs(self.C2 - self.C1.conjugate()) <= REAL_TOL * scale


@dataclass(frozen=True)
class FieldSnapshot:
    grid: ZGrid
    E_x: np.ndarray
    H_y: np.ndarray
    t: float

    def __post_init__(self):
        E = np.array(self.E_x, dtype=complex)
        H = np.array(self.H_y, dtype=complex)
        if E.shape != (self.grid.n_points,) or H.shape != (self.grid.n_points,):
            raise ValueError("E_x and H_y must have one sample per grid point")
        E.flags.writeable = False
        H.flags.writeable = False
        object.__setattr__(self, "E_x", E)
        object.__setattr__(self, "H_y", H)

    @property
    def z(self) -> np.ndarray:
        return self.grid.z_values

    def is_real(self, tol: float = 1e-12) -> bool:
        scale = max(np.abs(self.E_x).max(), np.abs(self.H_y).max())
        worst = max(np.abs(self.E_x.imag).max(), np.abs(self.H_y.imag).max())
        return worst <= tol * scale


@dataclass(frozen=True)
class ResidualReport:
    """Discrete L2 norms of the four Ampere/Faraday residual combinations.

    ``*_standard`` are ``eps0 dE/dt - (curl H)_x`` and
    ``(curl E)_y + mu0 dH/dt``; ``*_dual`` flip the relative sign.
    """

    ampere_standard: float
    faraday_standard: float
    ampere_dual: float
    faraday_dual: float
    dz: float
    dt: float

    def as_dict(self) -> dict:
        return {
            "ampere_standard": self.ampere_standard,
            "faraday_standard": self.faraday_standard,
            "ampere_dual": self.ampere_dual,
            "faraday_dual": self.faraday_dual,
            "dz": self.dz,
            "dt": self.dt,
        }


@dataclass(frozen=True)
class H1Result:
    mode_sum: float
    quadrature: float

    @property
    def relative_gap(self) -> float:
        return abs(self.mode_sum - self.quadrature) / max(abs(self.mode_sum), 1e-300)


@dataclass(frozen=True)
class H2Result:
    """Second-family energy from the primed amplitude and from (q'', p'').

    ``conserved`` is False when a non-zero ``C_prime`` makes the energy
    time-dependent.
    """

    direct: float
    canonical: float
    conserved: bool = field(default=True)

    @property
    def identity_gap(self) -> float:
        return abs(self.direct - self.canonical) / max(abs(self.direct), 1e-300)


def q_of_t(state: ModeState, nu: float, t):
    phase = np.exp(1j * nu * np.asarray(t, dtype=float))
    return state.C1 * phase + state.C2 / phase


def q_dot_of_t(state: ModeState, nu: float, t):
    phase = np.exp(1j * nu * np.asarray(t, dtype=float))
    return 1j * nu * (state.C1 * phase - state.C2 / phase)


def q_prime_of_t(state: ModeState, nu: float, t):
    """Antiderivative of ``q`` plus the integration constant ``C_prime``."""
    if nu == 0:
        raise ValueError("q' is undefined for nu = 0 (antiderivative changes form)")
    phase = np.exp(1j * nu * np.asarray(t, dtype=float))
    return (state.C1 * phase - state.C2 / phase) / (1j * nu) + state.C_prime


def f_alpha(state: ModeState, cfg: CavityConfig, t, z_ref: float = 0.0):
    """Free function added to ``H_y`` by the general Ampere solution.

    Evaluated at a fixed reference plane ``z_ref``.  Using ``q'' = -nu^2 q``
    the integrand ``A cos(k z_ref) [q k/mu0 - q'' eps0/k]`` becomes
    ``(2k/mu0) A cos(k z_ref) q`` and integrates in closed form.
    """
    k, nu, A = mode_constants(cfg, state.alpha)
    if not (-1e-12 * cfg.L <= z_ref <= cfg.L * (1 + 1e-12)):
        raise ValueError(f"z_ref must lie in [0, L], got {z_ref}")
    antiderivative = q_prime_of_t(state, nu, t) - state.C_prime
    return (2.0 * k / cfg.mu0) * A * math.cos(k * z_ref) * antiderivative + state.C_const


def _sorted_modes(states: Iterable[ModeState]) -> list[ModeState]:
    states = list(states)
    alphas = [s.alpha for s in states]
    if len(set(alphas)) != len(alphas):
        raise ValueError(f"duplicate mode indices in {sorted(alphas)}")
    return sorted(states, key=lambda s: s.alpha)


def synthesize_first_solution(states: Sequence[ModeState], cfg: CavityConfig, grid: ZGrid, t: float) -> FieldSnapshot:
    """Fields of the first family, with the free function set to zero."""
    E = np.zeros(grid.n_points, dtype=complex)
    H = np.zeros(grid.n_points, dtype=complex)
    for s in _sorted_modes(states):
        k, nu, A = mode_constants(cfg, s.alpha)
        E += A * q_of_t(s, nu, t) * electric_profile(s.alpha, grid, cfg)
        H += (cfg.epsilon0 * A / k) * q_dot_of_t(s, nu, t) * magnetic_profile(s.alpha, grid, cfg)
    return FieldSnapshot(grid, E, H, float(t))


def synthesize_second_solution(states: Sequence[ModeState], cfg: CavityConfig, grid: ZGrid, t: float) -> FieldSnapshot:
    """Fields of the second family: ``H_y`` from ``q'``, ``E_x`` from ``dq'/dt``."""
    E = np.zeros(grid.n_points, dtype=complex)
    H = np.zeros(grid.n_points, dtype=complex)
    for s in _sorted_modes(states):
        k, nu, A = mode_constants(cfg, s.alpha)
        H += (k * A / cfg.mu0) * q_prime_of_t(s, nu, t) * magnetic_profile(s.alpha, grid, cfg)
        E += A * q_of_t(s, nu, t) * electric_profile(s.alpha, grid, cfg)
    return FieldSnapshot(grid, E, H, float(t))


SYNTHESIZERS = {1: synthesize_first_solution, 2: synthesize_second_solution}


def snapshot_source(family: int, states: Sequence[ModeState], cfg: CavityConfig, grid: ZGrid) -> Callable[[float], FieldSnapshot]:
    """Time-indexed snapshot source for ``family`` (1 or 2) on ``grid``."""
    try:
        synth = SYNTHESIZERS[family]
    except KeyError:
        raise ValueError(f"family must be 1 or 2, got {family!r}") from None
    states = list(states)
    return lambda t: synth(states, cfg, grid, t)


def field_energy(snapshot: FieldSnapshot, cfg: CavityConfig) -> float:
    """``(1/2) int (eps0 |E|^2 + mu0 |H|^2) dV`` with cross-section ``V/L``."""
    density = cfg.epsilon0 * np.abs(snapshot.E_x) ** 2 + cfg.mu0 * np.abs(snapshot.H_y) ** 2
    return 0.5 * (cfg.V / cfg.L) * float(trapezoid(density, dx=snapshot.grid.dz))


def _require_real(states: Iterable[ModeState], need_real_prime: bool = False):
    for s in states:
        if not s.is_real():
            raise ValueError(
                f"mode alpha={s.alpha}: q(t) is complex-valued (C2 != conj(C1)); "
                "the energy of a complex representative is not the physical energy")
        if need_real_prime and abs(s.C_prime.imag) > REAL_TOL * max(abs(s.C_prime), 1.0):
            raise ValueError(f"mode alpha={s.alpha}: C_prime must be real for a physical q'(t)")


def canonical_pair(state: ModeState, cfg: CavityConfig, t) -> tuple:
    """Real ``(q, p)`` with ``p = m dq/dt``."""
    _, nu, _ = mode_constants(cfg, state.alpha)
    m = cfg.mass_for(state.alpha)
    return np.real(q_of_t(state, nu, t)), m * np.real(q_dot_of_t(state, nu, t))


def h1_mode_sum(states: Sequence[ModeState], cfg: CavityConfig, t):
    """``(1/2) sum (m nu^2 q^2 + p^2/m)``; vectorized over ``t``."""
    states = _sorted_modes(states)
    _require_real(states)
    total = np.zeros(np.shape(t))
    for s in states:
        _, nu, _ = mode_constants(cfg, s.alpha)
        m = cfg.mass_for(s.alpha)
        q, p = canonical_pair(s, cfg, t)
        total = total + 0.5 * (m * nu**2 * q**2 + p**2 / m)
    return total


def hamiltonian_h1(states: Sequence[ModeState], cfg: CavityConfig, t: float, grid: ZGrid | None = None) -> H1Result:
    """First-family energy as a mode sum and as a volume quadrature."""
    if grid is None:
        grid = ZGrid.for_cavity(cfg, 2049)
    mode_sum = float(h1_mode_sum(states, cfg, t))
    quad = field_energy(synthesize_first_solution(states, cfg, grid, t), cfg)
    return H1Result(mode_sum, quad)


def canonical_double_prime(state: ModeState, cfg: CavityConfig, t) -> tuple:
    """Second-family canonical pair ``q'' = nu q'`` and ``p'' = m nu dq'/dt``."""
    _, nu, _ = mode_constants(cfg, state.alpha)
    m = cfg.mass_for(state.alpha)
    return nu * q_prime_of_t(state, nu, t), m * nu * q_of_t(state, nu, t)


def h2_terms(states: Sequence[ModeState], cfg: CavityConfig, t) -> tuple:
    """Vectorized ``(direct, canonical)`` second-family energies."""
    states = _sorted_modes(states)
    _require_real(states, need_real_prime=True)
    direct = np.zeros(np.shape(t))
    canonical = np.zeros(np.shape(t))
    for s in states:
        _, nu, _ = mode_constants(cfg, s.alpha)
        m = cfg.mass_for(s.alpha)
        qp = np.real(q_prime_of_t(s, nu, t))
        dqp = np.real(q_of_t(s, nu, t))
        direct = direct + 0.5 * (m * nu**4 * qp**2 + m * nu**2 * dqp**2)
        q2, p2 = canonical_double_prime(s, cfg, t)
        q2, p2 = np.real(q2), np.real(p2)
        canonical = canonical + 0.5 * (m * nu**2 * q2**2 + p2**2 / m)
    return direct, canonical


def hamiltonian_h2(states: Sequence[ModeState], cfg: CavityConfig, t: float) -> H2Result:
    direct, canonical = h2_terms(states, cfg, t)
    conserved = all(s.C_prime == 0 for s in states)
    return H2Result(float(direct), float(canonical), conserved)


def discrete_l2(values: np.ndarray, dz: float) -> float:
    return math.sqrt(dz * float(np.sum(np.abs(values) ** 2)))


def maxwell_residuals(snapshot_fn: Callable[[float], FieldSnapshot], cfg: CavityConfig, t: float, dt: float) -> ResidualReport:
    """Central-difference Maxwell residuals on the interior grid points.

    ``(curl H)_x = -dH_y/dz`` and ``(curl E)_y = dE_x/dz`` for fields that
    depend on ``z`` only.
    """
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    before, now, after = snapshot_fn(t - dt), snapshot_fn(t), snapshot_fn(t + dt)
    grid = now.grid
    if grid.n_points < 3:
        raise ValueError("residuals need at least 3 grid points")
    if not (before.grid.n_points == after.grid.n_points == grid.n_points):
        raise ValueError("snapshots at t-dt, t, t+dt must share one grid")
    dz = grid.dz
    dE_dt = (after.E_x[1:-1] - before.E_x[1:-1]) / (2 * dt)
    dH_dt = (after.H_y[1:-1] - before.H_y[1:-1]) / (2 * dt)
    dE_dz = (now.E_x[2:] - now.E_x[:-2]) / (2 * dz)
    dH_dz = (now.H_y[2:] - now.H_y[:-2]) / (2 * dz)
    eps_dE = cfg.epsilon0 * dE_dt
    mu_dH = cfg.mu0 * dH_dt
    return ResidualReport(
        ampere_standard=discrete_l2(eps_dE + dH_dz, dz),
        faraday_standard=discrete_l2(dE_dz + mu_dH, dz),
        ampere_dual=discrete_l2(eps_dE - dH_dz, dz),
        faraday_dual=discrete_l2(dE_dz - mu_dH, dz),
        dz=dz,
        dt=float(dt),
    )


def fundamental_period(states: Sequence[ModeState], cfg: CavityConfig) -> float:
    """Period of the lowest mode present (of mode 1 if there are none)."""
    alpha = min((s.alpha for s in states), default=1)
    _, nu, _ = mode_constants(cfg, alpha)
    return 2 * math.pi / nu


def convergence_study(family: int, states: Sequence[ModeState], cfg: CavityConfig, grid: ZGrid,
                      t: float, dt: float, levels: int) -> list[ResidualReport]:
    """Residual reports with ``dz`` and ``dt`` halved together ``levels - 1`` times."""
    if levels < 2:
        raise ValueError(f"levels must be at least 2 to estimate an order, got {levels}")
    reports = []
    for _ in range(levels):
        reports.append(maxwell_residuals(snapshot_source(family, states, cfg, grid), cfg, t, dt))
        grid, dt = grid.refined(), dt / 2
    return reports


def observed_orders(values: Sequence[float]) -> list[float]:
    """``log2(r_k / r_{k+1})`` for successive levels; nan when undefined."""
    out = []
    for coarse, fine in zip(values, values[1:]):
        if coarse > 0 and fine > 0:
            out.append(math.log2(coarse / fine))
        else:
            out.append(float("nan"))
    return out
