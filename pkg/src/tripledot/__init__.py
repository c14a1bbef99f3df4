"""Triple quantum dot (1,0,1) entangling gate: exact dynamics, t-J analytics and noise."""
from .fock import FockState, SectorBasis, enumerate_sector, full_basis, orbital, state
from .hubbard import HamiltonianMatrix, HubbardParams, NuclearFields, build_hubbard, build_zeeman, sector_block
from .tjmodel import (
    EffectiveParams,
    analytic_overlap,
    analytic_spectrum,
    effective_hamiltonian,
    eliminate_double_occupancy,
    return_times,
    target_times,
)
from .dynamics import TIME_UNIT_NS, StateVector, evolve_piecewise, evolve_static
from .noise import OneOverFConfig, calibrate_amplitude, fit_envelope_decay, gen_one_over_f, sample_nuclear
from .gatelab import (
    ChargeNoise,
    ExperimentConfig,
    FidelityTrace,
    calibrate_charge_noise,
    fidelity_trace,
    find_gate_time,
    gate_target,
    partial_swap_target,
    run_superposition_check,
)

__version__ = "0.1.0"
