"""FitzHugh-Nagumo ring lattice with boundary feedback.

Thin re-export of the compiled core: model constants, RK integrators,
energy/synchronization diagnostics, and the deterministic sweep engine.
"""

from ._core import (  # noqa: F401
    AssumptionEnvelope,
    BoundViolation,
    CubicNonlinearity,
    DerivedConstants,
    DiagnosticsSeries,
    DifferenceState,
    EnvelopeViolation,
    IntegrationFailure,
    IntegratorConfig,
    ModelParams,
    NetworkState,
    SweepGrid,
    SweepRecord,
    SyncInequalityReport,
    SyncVerdict,
    Trajectory,
    absorbing_entry_time,
    boundary_gap,
    build_series,
    check_dissipative_bound,
    check_sync_inequality,
    classify_sync,
    convergence_order,
    derived_constants,
    difference_energy,
    difference_state,
    dissipative_bound,
    divergence_residual,
    envelope_for_cubic,
    f_eval,
    f_prime,
    feedback_controls,
    feedback_sum_identity_residual,
    fit_decay_rate,
    integrate_adaptive,
    integrate_fixed,
    laplacian_periodic,
    plain_energy,
    random_initial,
    random_initial_generator_id,
    rhs,
    run_case,
    run_sweep,
    verify_envelope,
    weighted_energy,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
