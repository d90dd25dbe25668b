"""Truncated Fock-space operators for one cavity mode.

Operators are dense complex ``numpy`` arrays.  Single-oscillator operators
are ``dim x dim``; a two-family context realizes the first- and
second-family oscillators of one mode on the tensor product
``H_1 (x) H_2`` of dimension ``dim**2``, so operators of different
families commute by construction.

Truncation leaves one exactly known defect: ``[a, a^+]`` is the identity
except for the last diagonal entry, which equals ``-(dim - 1)``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .modes import CavityConfig, mode_constants

DEFAULT_DIM = 32
TAIL_WARN = 1e-8


class TruncationWarning(UserWarning):
    """A state lost noticeable probability to the Fock-space cutoff."""


@dataclass(frozen=True)
class FockContext:
    dim: int = DEFAULT_DIM
    nu: float = 1.0
    mass: float = 1.0
    hbar: float = 1.0
    families: int = 1

    def __post_init__(self):
        if isinstance(self.dim, bool) or int(self.dim) != self.dim or self.dim < 2:
            raise ValueError(f"fock.dim must be ≥ 2, got {self.dim}")
        if self.families not in (1, 2):
            raise ValueError(f"families must be 1 or 2, got {self.families}")
        for name in ("nu", "mass", "hbar"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be finite and positive, got {value}")

    @classmethod
    def for_mode(cls, cfg: CavityConfig, alpha: int, dim: int = DEFAULT_DIM, families: int = 1) -> "FockContext":
        _, nu, _ = mode_constants(cfg, alpha)
        return cls(dim=dim, nu=nu, mass=cfg.mass_for(alpha), hbar=cfg.hbar, families=families)

    @property
    def total_dim(self) -> int:
        return self.dim ** self.families


def _frozen(op: np.ndarray) -> np.ndarray:
    op.flags.writeable = False
    return op


def ladder_ops(ctx: FockContext) -> tuple[np.ndarray, np.ndarray]:
    """Annihilation and creation matrices, ``a[n-1, n] = sqrt(n)``."""
    a = np.diag(np.sqrt(np.arange(1, ctx.dim)), k=1).astype(complex)
    return _frozen(a), _frozen(a.conj().T.copy())


def number_op(ctx: FockContext) -> np.ndarray:
    return _frozen(np.diag(np.arange(ctx.dim)).astype(complex))


def commutator(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    if A.shape != B.shape or A.shape[0] != A.shape[1]:
        raise ValueError(f"commutator needs square operators of equal size, got {A.shape} and {B.shape}")
    return A @ B - B @ A


def embed(op: np.ndarray, family: int, ctx: FockContext) -> np.ndarray:
    """Place a single-oscillator operator on its tensor factor."""
    if ctx.families == 1:
        if family != 1:
            raise ValueError("single-family context has no second oscillator")
        return op
    eye = np.eye(ctx.dim, dtype=complex)
    if family == 1:
        return _frozen(np.kron(op, eye))
    if family == 2:
        return _frozen(np.kron(eye, op))
    raise ValueError(f"family must be 1 or 2, got {family!r}")


def canonical_ops(ctx: FockContext) -> tuple[np.ndarray, np.ndarray]:
    """``q = sqrt(hbar/(2 m nu)) (a^+ + a)``, ``p = i sqrt(hbar m nu / 2) (a^+ - a)``.

    The second family uses the same matrices in its own variables.
    """
    a, ad = ladder_ops(ctx)
    q = math.sqrt(ctx.hbar / (2 * ctx.mass * ctx.nu)) * (ad + a)
    p = 1j * math.sqrt(ctx.hbar * ctx.mass * ctx.nu / 2) * (ad - a)
    return _frozen(q), _frozen(p)


def ladder_from_canonical(q: np.ndarray, p: np.ndarray, ctx: FockContext) -> tuple[np.ndarray, np.ndarray]:
    """Invert :func:`canonical_ops`: ``a = (m nu q + i p) / sqrt(2 hbar m nu)``."""
    scale = 1.0 / math.sqrt(2 * ctx.hbar * ctx.mass * ctx.nu)
    mnq = ctx.mass * ctx.nu * q
    return scale * (mnq + 1j * p), scale * (mnq - 1j * p)


def hamiltonian_op(ctx: FockContext) -> np.ndarray:
    """``(1/2)(m nu^2 q^2 + p^2/m)``; summed over both oscillators when two families are present."""
    q, p = canonical_ops(ctx)
    h = 0.5 * (ctx.mass * ctx.nu**2 * (q @ q) + (p @ p) / ctx.mass)
    if ctx.families == 2:
        h = embed(h, 1, ctx) + embed(h, 2, ctx)
    return _frozen(h)


def time_evolve_ladder(ctx: FockContext, t: float) -> tuple[np.ndarray, np.ndarray]:
    """Heisenberg-picture ``a(t) = exp(-i nu t) a`` and its adjoint."""
    a, ad = ladder_ops(ctx)
    phase = np.exp(-1j * ctx.nu * t)
    return _frozen(phase * a), _frozen(np.conj(phase) * ad)


@dataclass(frozen=True)
class QuantumState:
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex)
        if amps.ndim != 1:
            raise ValueError("amplitudes must be a vector")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"state must be normalized, |psi| = {norm}")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]


def number_state(n: int, ctx: FockContext) -> QuantumState:
    if not 0 <= n < ctx.dim:
        raise ValueError(f"number state {n} outside the truncated space of dimension {ctx.dim}")
    amps = np.zeros(ctx.dim, dtype=complex)
    amps[n] = 1.0
    return QuantumState(amps)


def coherent_state(alpha: complex, ctx: FockContext) -> QuantumState:
    """Truncated coherent state, renormalized after the cutoff.

    Warns with :class:`TruncationWarning` when more than ``1e-8`` of the
    probability falls beyond the cutoff.
    """
    alpha = complex(alpha)
    if abs(alpha) ** 2 > ctx.dim / 4:
        raise ValueError(f"|alpha|^2 = {abs(alpha) ** 2:.3g} exceeds dim/4 = {ctx.dim / 4}; raise fock.dim")
    n = np.arange(ctx.dim)
    if alpha == 0:
        amps = (n == 0).astype(complex)
    else:
        log_mag = n * math.log(abs(alpha)) - 0.5 * gammaln(n + 1) - 0.5 * abs(alpha) ** 2
        amps = np.exp(log_mag) * np.exp(1j * n * np.angle(alpha))
    kept = float(np.sum(np.abs(amps) ** 2))
    if 1.0 - kept > TAIL_WARN:
        warnings.warn(f"coherent state alpha={alpha} loses {1.0 - kept:.2e} of its norm to truncation",
                      TruncationWarning, stacklevel=2)
    return QuantumState(amps / math.sqrt(kept))


def product_state(first: QuantumState, second: QuantumState) -> QuantumState:
    return QuantumState(np.kron(first.amplitudes, second.amplitudes))


def expect(op: np.ndarray, state: QuantumState) -> complex:
    psi = state.amplitudes
    return complex(np.vdot(psi, op @ psi))


def variance(op: np.ndarray, state: QuantumState) -> float:
    mean = expect(op, state)
    return float(np.real(expect(op @ op, state) - mean * mean))


def hermitian_part(op: np.ndarray) -> np.ndarray:
    return 0.5 * (op + op.conj().T)


def antihermitian_part(op: np.ndarray) -> np.ndarray:
    return 0.5 * (op - op.conj().T)


def hermiticity_error(op: np.ndarray) -> float:
    return float(np.max(np.abs(op - op.conj().T)))


def field_amplitude(cfg: CavityConfig, alpha: int) -> float:
    """Single-photon field scale ``E0 = sqrt(hbar nu / (V eps0))``."""
    _, nu, _ = mode_constants(cfg, alpha)
    return math.sqrt(cfg.hbar * nu / (cfg.V * cfg.epsilon0))


def _check_context(ctx: FockContext, cfg: CavityConfig, alpha: int):
    _, nu, _ = mode_constants(cfg, alpha)
    if not math.isclose(ctx.nu, nu, rel_tol=1e-12):
        raise ValueError(f"context frequency {ctx.nu} does not match mode alpha={alpha} (nu={nu})")
    if ctx.hbar != cfg.hbar:
        raise ValueError("context hbar differs from the cavity configuration")


def _profiles(cfg: CavityConfig, alpha: int, z: float) -> tuple[float, float]:
    k, _, _ = mode_constants(cfg, alpha)
    if not (-1e-12 * cfg.L <= z <= cfg.L * (1 + 1e-12)):
        raise ValueError(f"z must lie in [0, L], got {z}")
    return math.sin(k * z), math.cos(k * z)


def field_operators(family: int, ctx: FockContext, cfg: CavityConfig, alpha: int, z: float, t: float):
    """Electric and magnetic field operators of one mode at ``(z, t)``.

    Family 1: ``E = E0 (a^+ + a) sin kz``, ``H = i c eps0 E0 (a^+ - a) cos kz``.
    Family 2: ``E = i E0 (a''^+ - a'') sin kz``, ``H = E0 (a''^+ + a'') cos kz / (mu0 c)``.
    Returned on the single-oscillator space regardless of ``ctx.families``.
    """
    _check_context(ctx, cfg, alpha)
    s, c = _profiles(cfg, alpha, z)
    e0 = field_amplitude(cfg, alpha)
    a, ad = time_evolve_ladder(ctx, t)
    if family == 1:
        E = e0 * (ad + a) * s
        H = 1j * cfg.c * cfg.epsilon0 * e0 * (ad - a) * c
    elif family == 2:
        E = 1j * e0 * (ad - a) * s
        H = e0 * (ad + a) * c / (cfg.mu0 * cfg.c)
    else:
        raise ValueError(f"family must be 1 or 2, got {family!r}")
    return _frozen(E), _frozen(H)


def combined_field_ops(ctx: FockContext, cfg: CavityConfig, alpha: int, z: float, t: float,
                       C_alpha: float = 0.0):
    """Complexified operators on the two-family space.

    ``E = E0 {(a^+ + a) + (a'' - a''^+)} sin kz`` which is ``E^(1) + i E^(2)``,
    and ``H = E0 {(a'' + a''^+)/(mu0 c) + c eps0 (a - a^+)} cos kz + C_alpha``
    which is ``H^(2) + i H^(1)``.
    """
    if ctx.families != 2:
        raise ValueError("combined field operators need a two-family context")
    _check_context(ctx, cfg, alpha)
    s, c = _profiles(cfg, alpha, z)
    e0 = field_amplitude(cfg, alpha)
    a_t, ad_t = time_evolve_ladder(ctx, t)
    a, ad = embed(a_t, 1, ctx), embed(ad_t, 1, ctx)
    b, bd = embed(a_t, 2, ctx), embed(ad_t, 2, ctx)
    E = e0 * ((ad + a) + (b - bd)) * s
    H = e0 * ((b + bd) / (cfg.mu0 * cfg.c) + cfg.c * cfg.epsilon0 * (a - ad)) * c
    H = H + C_alpha * np.eye(ctx.total_dim)
    return _frozen(E), _frozen(H)


def coherent_amplitude_for(state, cfg: CavityConfig) -> complex:
    """Coherent amplitude whose first-family mean field reproduces a real mode.

    Matches ``q(t) = sqrt(2 hbar/(m nu)) Re(beta exp(-i nu t))``, giving
    ``beta = C2 sqrt(2 m nu / hbar)``.
    """
    _, nu, _ = mode_constants(cfg, state.alpha)
    m = cfg.mass_for(state.alpha)
    return complex(state.C2) * math.sqrt(2 * m * nu / cfg.hbar)


def operator_to_json(op: np.ndarray) -> list:
    """Rows of ``[re, im]`` pairs in row-major order."""
    return [[[float(v.real), float(v.imag)] for v in row] for row in np.asarray(op, dtype=complex)]


def operator_from_json(rows: list) -> np.ndarray:
    arr = np.asarray(rows, dtype=float)
    if arr.ndim != 3 or arr.shape[2] != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError("operator dump must be a square array of [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]
