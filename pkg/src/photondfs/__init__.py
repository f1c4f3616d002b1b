"""Polarization decoherence of multi-photon states under weighted collective noise.

Builds Lindblad generators from frequency-deviation correlation matrices,
propagates density matrices (RK4, superoperator exponential, closed forms),
and checks which states and subspaces stay decoherence free.
"""
from .dfs import DfsReport, dark_state_check, decay_rate_probe, subspace_check
from .lindblad import (
    CouplingModel,
    LindbladGenerator,
    a1_table_generator,
    apply,
    build_generator,
    choi_matrix,
    preset_correlation,
    superoperator,
)
from .observables import (
    XVariables,
    concurrence,
    fidelity,
    fit_rate,
    purity,
    trace_distance,
    x_inverse,
    x_transform,
)
from .operators import PauliAxis, embed, matrix_exp, pauli, weighted_collective
from .propagate import (
    TimeGrid,
    Trajectory,
    closed_form_pair,
    closed_form_single,
    propagate_closed_form,
    propagate_expm,
    propagate_rk4,
)
from .spectra import CorrelationModel, SpectrumModel, correlation_matrix
from .states import density_from_pure, named_state, random_density, validate

__version__ = "0.1.0"
