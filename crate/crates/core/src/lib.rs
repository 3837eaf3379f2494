//! Sentiment-signed community detection and profiling.
//!
//! The crate turns raw social-media messages into a signed user-opinion
//! matrix `X` (expressions × users), combines it with a normalized
//! interaction graph `W̃`, and factorizes
//!
//! ```text
//! min  ‖X − V Uᵀ‖²_F − λ·Tr(Uᵀ W̃ U)    s.t.  U ≥ 0, UᵀU = I
//! ```
//!
//! with a multiplicative update for the membership matrix `U` and a
//! closed-form least-squares update for the signed profile matrix `V`.
//! Positive and negative entries of each column of `V` form a community's
//! supportive and opposing key expressions.
//!
//! Modules:
//! - [`opinion`]: tokenizing, tagging, key-expression extraction, sentiment
//!   attribution and the opinion matrix.
//! - [`graph`]: interaction matrix and its symmetric normalization.
//! - [`solver`]: the factorization, diagnostics and λ grid search.
//! - [`synthetic`]: planted-partition benchmark instances.
//! - [`metrics`]: NMI, ARI and purity.
//! - [`profile`]: signed community profiles and sentiment-word summaries.
//! - [`matrix_io`]: the labeled CSV layout shared by all matrices.

pub mod error;
pub mod graph;
pub mod matrix_io;
pub mod metrics;
pub mod opinion;
pub mod profile;
pub mod solver;
pub mod synthetic;

pub use error::{Error, Result};
