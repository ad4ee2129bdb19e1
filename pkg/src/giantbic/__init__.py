"""Bound states in the continuum and entanglement of two giant atoms on a waveguide."""
from .model import (
    Geometry,
    ModelParams,
    build_momentum_grid,
    coupling_amplitude,
    dispersion,
    effective_bell_coupling,
    form_factor,
    interference_factor,
    propagation_phase,
    resonant_wavevector,
)
from .entanglement import (
    bell_transform,
    bic_state,
    concurrence_closed_form,
    concurrence_from_bell,
    fidelity_closed_form,
    fidelity_to_phi,
    inverse_bell_transform,
    reduced_atomic_density,
    wootters_concurrence,
)
from .spectral import (
    BicSolution,
    decay_rate_continuum,
    find_bic,
    lamb_shift,
    on_shell_dark_state,
    robust_bic_check,
    self_energy,
)
from .dynamics import (
    SingleExcitationState,
    Trajectory,
    build_hamiltonian,
    concurrence_trajectory,
    detuned_case,
    diagonalize,
    evolve_ed,
    evolve_volterra,
    evolve_volterra_coupled,
    markov_amplitude,
    memory_kernel,
)

__version__ = "0.1.0"
