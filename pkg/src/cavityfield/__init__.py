"""Classical and truncated-Fock quantized fields of a one-dimensional cavity."""

from .classical import (FieldSnapshot, ModeState, ResidualReport, canonical_double_prime, f_alpha,
                        field_energy, hamiltonian_h1, hamiltonian_h2, maxwell_residuals, q_of_t,
                        q_prime_of_t, synthesize_first_solution, synthesize_second_solution)
from .duality import duality_rotate, invariance_report
from .fock import (FockContext, QuantumState, canonical_ops, coherent_state, combined_field_ops,
                   commutator, field_operators, hamiltonian_op, ladder_ops, time_evolve_ladder)
from .modes import CavityConfig, ZGrid, electric_profile, magnetic_profile, mode_constants

__version__ = "0.1.0"
