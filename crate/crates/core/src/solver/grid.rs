use ndarray::Array2;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::{score, LabeledPartition, Scores};

use super::solve::{hard_assign, solve, SolverConfig};
use super::updates::objective_parts;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub lambda: f64,
    pub objective: f64,
    pub reconstruction: f64,
    /// `Tr(Uᵀ W̃ U)` at the solution.
    pub trace: f64,
    /// `λ·Tr(Uᵀ W̃ U)`, the amount subtracted from the reconstruction.
    pub trace_term: f64,
    pub iterations: usize,
    pub converged: bool,
    pub kkt_residual: f64,
    pub restart_id: usize,
    pub scores: Option<Scores>,
    pub best: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridReport {
    pub points: Vec<GridPoint>,
    /// Index into `points` of the best NMI, when labels were supplied.
    pub best_index: Option<usize>,
}

/// `[1, 10, …, 10^max_exp]`.
pub fn powers_of_ten(max_exp: i32) -> Vec<f64> {
    (0..=max_exp).map(|e| 10f64.powi(e)).collect()
}

/// Solves once per λ with otherwise identical settings. With `truth`
/// (aligned with the columns of `X`), every point is scored and the first
/// point with the highest NMI is marked best.
pub fn grid_search(
    x: &Array2<f64>,
    w_norm: &Array2<f64>,
    lambdas: &[f64],
    base: &SolverConfig,
    truth: Option<&[usize]>,
) -> Result<GridReport> {
    if lambdas.is_empty() {
        return Err(Error::invalid("lambda grid is empty"));
    }
    let truth = match truth {
        Some(t) if t.len() != x.ncols() => {
            return Err(Error::Dimension(format!(
                "{} truth labels for {} users",
                t.len(),
                x.ncols()
            )))
        }
        Some(t) => Some(LabeledPartition::from_usize(t)?),
        None => None,
    };
    let mut points = lambdas
        .par_iter()
        .map(|&lambda| {
            let config = SolverConfig { lambda, ..*base };
            let (fac, diag) = solve(x, w_norm, &config)?;
            let parts = objective_parts(x, &fac.u, &fac.v, w_norm)?;
            let scores = match &truth {
                Some(t) => {
                    let pred = LabeledPartition::from_usize(&hard_assign(&fac.u).labels)?;
                    Some(score(&pred, t)?)
                }
                None => None,
            };
            Ok(GridPoint {
                lambda,
                objective: parts.value(lambda),
                reconstruction: parts.reconstruction,
                trace: parts.trace,
                trace_term: lambda * parts.trace,
                iterations: diag.iterations_run,
                converged: diag.converged,
                kkt_residual: diag.kkt_residual,
                restart_id: diag.restart_id,
                scores,
                best: false,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let best_index = points
        .iter()
        .enumerate()
        .filter_map(|(i, p)| p.scores.map(|s| (i, s.nmi)))
        .fold(None::<(usize, f64)>, |acc, (i, v)| match acc {
            Some((_, bv)) if bv >= v => acc,
            _ => Some((i, v)),
        })
        .map(|(i, _)| i);
    if let Some(i) = best_index {
        points[i].best = true;
    }
    Ok(GridReport { points, best_index })
}
