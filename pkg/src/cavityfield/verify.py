"""Self-checks run by ``cavityfield verify``.

Each check measures one non-negative number and passes when it does not
exceed its tolerance.  Tolerances can be overridden per run through the
``verify.tolerances`` section of the config.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .classical import (ModeState, convergence_study, field_energy, fundamental_period, h1_mode_sum,
                        h2_terms, hamiltonian_h1, observed_orders, synthesize_first_solution)
from .config import ConfigError, RunConfig
from .duality import TWO_PI, duality_rotate
from .fock import (FockContext, antihermitian_part, canonical_ops, coherent_amplitude_for,
                   coherent_state, combined_field_ops, commutator, expect, field_amplitude,
                   field_operators, hamiltonian_op, hermitian_part, ladder_ops)
from .modes import ZGrid

TOLERANCES = {
    "ladder_commutator_block": 1e-13,
    "ladder_commutator_corner": 0.0,
    "canonical_commutator": 1e-13,
    "vacuum_energy": 1e-12,
    "h1_conservation": 1e-12,
    "h1_quadrature": 1e-10,
    "h2_identity": 1e-13,
    "first_family_standard_order": 0.2,
    "second_family_dual_order": 0.2,
    "second_family_standard_dominates": 1e-3,
    "duality_energy_spread": 1e-12,
    "duality_quarter_turn": 1e-15,
    "complexification_identity": 1e-13,
    "correspondence": 1e-8,
}

CONVERGENCE_LEVELS = 4
DUALITY_ANGLES = 16
COMBINED_DIM = 8


@dataclass
class CheckResult:
    check_name: str
    status: str
    measured: float | None
    tolerance: float
    note: str = ""

    def as_dict(self) -> dict:
        out = {"check_name": self.check_name, "status": self.status,
               "measured": None if self.measured is None or not math.isfinite(self.measured) else self.measured,
               "tolerance": self.tolerance}
        if self.note:
            out["note"] = self.note
        return out


class Skip(Exception):
    pass


def _lowest_mode(cfg: RunConfig) -> ModeState:
    return min(cfg.modes, key=lambda s: s.alpha) if cfg.modes else ModeState.cosine(1)


def _has_amplitude(cfg: RunConfig) -> bool:
    return any(abs(s.C1) > 0 or abs(s.C2) > 0 for s in cfg.modes)


def _require_real(cfg: RunConfig):
    if not all(s.is_real() and s.C_prime.imag == 0 for s in cfg.modes):
        raise Skip("modes are complex representatives")


def check_ladder_block(cfg: RunConfig) -> float:
    a, ad = ladder_ops(FockContext(cfg.fock_dim))
    comm = commutator(a, ad)
    n = cfg.fock_dim - 1
    return float(np.max(np.abs(comm[:n, :n] - np.eye(n))))


def check_ladder_corner(cfg: RunConfig) -> float:
    a, ad = ladder_ops(FockContext(cfg.fock_dim))
    return float(abs(commutator(a, ad)[-1, -1] + (cfg.fock_dim - 1)))


def check_canonical(cfg: RunConfig) -> float:
    ctx = FockContext.for_mode(cfg.cavity, _lowest_mode(cfg).alpha, cfg.fock_dim)
    q, p = canonical_ops(ctx)
    n = ctx.dim - 1
    block = commutator(q, p)[:n, :n] / ctx.hbar
    return float(np.max(np.abs(block - 1j * np.eye(n))))


def check_vacuum(cfg: RunConfig) -> float:
    ctx = FockContext.for_mode(cfg.cavity, _lowest_mode(cfg).alpha, cfg.fock_dim)
    ground = np.linalg.eigvalsh(hamiltonian_op(ctx))[0]
    half = ctx.hbar * ctx.nu / 2
    return float(abs(ground - half) / half)


def _period_samples(cfg: RunConfig) -> np.ndarray:
    return np.linspace(0.0, 10 * fundamental_period(cfg.modes, cfg.cavity), 1000)


def check_h1_conservation(cfg: RunConfig) -> float:
    _require_real(cfg)
    energy = h1_mode_sum(cfg.modes, cfg.cavity, _period_samples(cfg))
    scale = float(energy.max())
    return 0.0 if scale == 0 else float((energy.max() - energy.min()) / scale)


def check_h1_quadrature(cfg: RunConfig) -> float:
    _require_real(cfg)
    res = hamiltonian_h1(cfg.modes, cfg.cavity, cfg.t, cfg.grid)
    return 0.0 if res.mode_sum == 0 else res.relative_gap


def check_h2_identity(cfg: RunConfig) -> float:
    _require_real(cfg)
    direct, canonical = h2_terms(cfg.modes, cfg.cavity, _period_samples(cfg))
    scale = np.maximum(np.abs(direct), 1e-300)
    return float(np.max(np.abs(direct - canonical) / scale))


def _orders(cfg: RunConfig, family: int, keys) -> float:
    if not _has_amplitude(cfg):
        raise Skip("all mode amplitudes are zero")
    reports = convergence_study(family, cfg.modes, cfg.cavity, cfg.grid, cfg.t, cfg.time_step, CONVERGENCE_LEVELS)
    worst = 0.0
    for key in keys:
        for order in observed_orders([getattr(r, key) for r in reports]):
            worst = max(worst, abs(order - 2.0)) if math.isfinite(order) else math.inf
    return worst


def check_first_order(cfg: RunConfig) -> float:
    return _orders(cfg, 1, ("ampere_standard", "faraday_standard"))


def check_second_order(cfg: RunConfig) -> float:
    return _orders(cfg, 2, ("ampere_dual", "faraday_dual"))


def check_second_dominates(cfg: RunConfig) -> float:
    if not _has_amplitude(cfg):
        raise Skip("all mode amplitudes are zero")
    finest = convergence_study(2, cfg.modes, cfg.cavity, cfg.grid, cfg.t, cfg.time_step, CONVERGENCE_LEVELS)[-1]
    return max(finest.ampere_dual / finest.ampere_standard, finest.faraday_dual / finest.faraday_standard)


def check_duality_energy(cfg: RunConfig) -> float:
    snap = synthesize_first_solution(cfg.modes, cfg.cavity, cfg.grid, cfg.t)
    energies = [field_energy(duality_rotate(snap, TWO_PI * j / DUALITY_ANGLES, cfg.cavity), cfg.cavity)
                for j in range(DUALITY_ANGLES)]
    scale = max(energies)
    return 0.0 if scale == 0 else (max(energies) - min(energies)) / scale


def check_quarter_turn(cfg: RunConfig) -> float:
    cav = cfg.cavity
    snap = synthesize_first_solution(cfg.modes, cav, cfg.grid, cfg.t)
    turned = duality_rotate(snap, math.pi / 2, cav)
    impedance = math.sqrt(cav.mu0 / cav.epsilon0)
    want_E = impedance * snap.H_y
    want_H = -snap.E_x / impedance
    scale = max(np.abs(want_E).max(), np.abs(want_H).max())
    if scale == 0:
        return float(max(np.abs(turned.E_x).max(), np.abs(turned.H_y).max()))
    return float(max(np.abs(turned.E_x - want_E).max(), np.abs(turned.H_y - want_H).max()) / scale)


def check_complexification(cfg: RunConfig) -> float:
    cav = cfg.cavity
    alpha = _lowest_mode(cfg).alpha
    ctx2 = FockContext.for_mode(cav, alpha, COMBINED_DIM, families=2)
    ctx1 = FockContext.for_mode(cav, alpha, COMBINED_DIM)
    z, t = 0.37 * cav.L, cfg.t
    E, _ = combined_field_ops(ctx2, cav, alpha, z, t)
    E1, _ = field_operators(1, ctx1, cav, alpha, z, t)
    E2, _ = field_operators(2, ctx1, cav, alpha, z, t)
    eye = np.eye(COMBINED_DIM)
    err_h = np.abs(hermitian_part(E) - np.kron(E1, eye)).max()
    err_a = np.abs(antihermitian_part(E) - 1j * np.kron(eye, E2)).max()
    return float(max(err_h, err_a) / field_amplitude(cav, alpha))


def check_correspondence(cfg: RunConfig) -> float:
    cav = cfg.cavity
    mode = _lowest_mode(cfg)
    if not mode.is_real():
        raise Skip("lowest mode is a complex representative")
    beta = coherent_amplitude_for(mode, cav)
    if beta == 0:
        raise Skip("lowest mode has zero amplitude")
    ctx = FockContext.for_mode(cav, mode.alpha, cfg.fock_dim)
    psi = coherent_state(beta, ctx)
    grid = ZGrid.for_cavity(cav, 33)
    period = 2 * math.pi / ctx.nu
    worst = 0.0
    for t in np.linspace(0.0, period, 17):
        classical = synthesize_first_solution([mode], cav, grid, t).E_x
        for z, e_cl in zip(grid.z_values, classical):
            E, _ = field_operators(1, ctx, cav, mode.alpha, float(z), float(t))
            worst = max(worst, abs(expect(E, psi) - e_cl))
    return worst / field_amplitude(cav, mode.alpha)


CHECKS: dict[str, Callable[[RunConfig], float]] = {
    "ladder_commutator_block": check_ladder_block,
    "ladder_commutator_corner": check_ladder_corner,
    "canonical_commutator": check_canonical,
    "vacuum_energy": check_vacuum,
    "h1_conservation": check_h1_conservation,
    "h1_quadrature": check_h1_quadrature,
    "h2_identity": check_h2_identity,
    "first_family_standard_order": check_first_order,
    "second_family_dual_order": check_second_order,
    "second_family_standard_dominates": check_second_dominates,
    "duality_energy_spread": check_duality_energy,
    "duality_quarter_turn": check_quarter_turn,
    "complexification_identity": check_complexification,
    "correspondence": check_correspondence,
}


def run_checks(cfg: RunConfig) -> list[CheckResult]:
    unknown = set(cfg.tolerances) - set(TOLERANCES)
    if unknown:
        raise ConfigError(f"verify.tolerances has unknown check names: {sorted(unknown)}")
    tolerances = {**TOLERANCES, **cfg.tolerances}
    results = []
    for name, check in CHECKS.items():
        tol = tolerances[name]
        try:
            measured = float(check(cfg))
        except Skip as why:
            results.append(CheckResult(name, "skipped", None, tol, str(why)))
            continue
        except (ValueError, ArithmeticError) as exc:
            results.append(CheckResult(name, "error", None, tol, str(exc)))
            continue
        ok = math.isfinite(measured) and measured <= tol
        results.append(CheckResult(name, "pass" if ok else "fail", measured, tol))
    return results


def all_passed(results: list[CheckResult]) -> bool:
    return all(r.status in ("pass", "skipped") for r in results)
