//! Graph-regularized semi-NMF.
//!
//! Minimizes `‖X − V Uᵀ‖²_F − λ·Tr(Uᵀ W̃ U)` over `U ≥ 0` (orthogonality
//! handled through the multiplier Γ inside the `U` update, never by
//! explicit renormalization) and signed `V`, alternating a multiplicative
//! step on `U` with the exact least-squares step on `V`.

mod grid;
mod solve;
mod updates;

pub use grid::{grid_search, powers_of_ten, GridPoint, GridReport};
pub use solve::{
    hard_assign, initialize, solve, solve_observed, Assignment, Factorization, IterationRecord,
    RestartReport, SolveDiagnostics, SolverConfig,
};
pub use updates::{
    compute_gamma, frobenius, graph_trace, kkt_residual, objective, objective_parts,
    orthogonality_residual, reconstruction_error, split_signs, update_u, update_v,
    update_v_detailed, ObjectiveParts, VUpdate, CONDITION_LIMIT, RIDGE,
};
