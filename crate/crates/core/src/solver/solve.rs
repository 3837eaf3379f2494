use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::updates::{
    kkt_residual, objective, orthogonality_residual, reconstruction_error, update_u,
    update_v_detailed,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    pub k: usize,
    pub lambda: f64,
    pub max_iter: usize,
    /// Threshold on `|F_t − F_{t−1}| / (1 + |F_{t−1}|)`.
    pub tol: f64,
    /// Consecutive iterations that must stay under `tol` before stopping.
    pub patience: usize,
    pub restarts: usize,
    pub seed: u64,
    pub div_epsilon: f64,
    pub init_floor: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            k: 2,
            lambda: 0.0,
            max_iter: 500,
            tol: 1e-6,
            patience: 20,
            restarts: 10,
            seed: 42,
            div_epsilon: 1e-12,
            init_floor: 0.01,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self, n_users: usize) -> Result<()> {
        let finite = [self.lambda, self.tol, self.div_epsilon, self.init_floor]
            .iter()
            .all(|v| v.is_finite());
        let problem = if self.k < 2 {
            Some(format!("k = {} must be at least 2", self.k))
        } else if self.k > n_users {
            Some(format!("k = {} exceeds the {} users", self.k, n_users))
        } else if !finite {
            Some("numeric settings must be finite".to_string())
        } else if self.lambda < 0.0 {
            Some(format!("lambda = {} must be nonnegative", self.lambda))
        } else if self.max_iter == 0 || self.restarts == 0 || self.patience == 0 {
            Some("max_iter, restarts and patience must be positive".to_string())
        } else if self.tol < 0.0 || self.div_epsilon <= 0.0 || self.init_floor < 0.0 {
            Some(
                "tol, div_epsilon and init_floor must be nonnegative (div_epsilon positive)"
                    .to_string(),
            )
        } else {
            None
        };
        match problem {
            Some(p) => Err(Error::Invalid(p)),
            None => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Factorization {
    /// n×k community membership, nonnegative.
    pub u: Array2<f64>,
    /// m×k community profiles, signed.
    pub v: Array2<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestartReport {
    pub restart_id: usize,
    pub initial_objective: f64,
    pub final_objective: Option<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub kkt_residual: Option<f64>,
    pub ridge_fallbacks: usize,
    pub failure: Option<String>,
    pub objective_trace: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveDiagnostics {
    /// Objective of the returned restart, starting with its initial value.
    pub objective_trace: Vec<f64>,
    pub iterations_run: usize,
    pub converged: bool,
    pub kkt_residual: f64,
    pub orthogonality_residual: f64,
    pub restart_id: usize,
    pub restarts: Vec<RestartReport>,
}

/// Everything an observer sees after one U-step/V-step pair.
#[derive(Debug, Clone, Copy)]
pub struct IterationRecord {
    pub restart: usize,
    pub iteration: usize,
    pub objective_before: f64,
    pub objective_after: f64,
    /// `‖X − V Uᵀ‖²` with the new `U` and the previous `V`.
    pub reconstruction_before_v: f64,
    /// Same, after the `V` step.
    pub reconstruction_after_v: f64,
    pub min_u: f64,
    pub all_finite: bool,
}

/// Random starting point for one restart: `U ~ U(0,1) + floor` with each
/// column then scaled to unit norm, `V ~ U(−1,1)`, drawn from a ChaCha
/// stream keyed by `(seed, restart)`.
pub fn initialize(n: usize, m: usize, config: &SolverConfig, restart: usize) -> Factorization {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(restart as u64);
    let mut u =
        Array2::from_shape_simple_fn((n, config.k), || rng.random::<f64>() + config.init_floor);
    for mut col in u.columns_mut() {
        let norm = col.iter().map(|v| v * v).sum::<f64>().sqrt();
        col.mapv_inplace(|v| v / norm);
    }
    let v = Array2::from_shape_simple_fn((m, config.k), || rng.random_range(-1.0..1.0));
    Factorization { u, v }
}

fn relative_change(prev: f64, cur: f64) -> f64 {
    (cur - prev).abs() / (1.0 + prev.abs())
}

struct RestartOutcome {
    report: RestartReport,
    factors: Option<Factorization>,
}

fn run_restart(
    x: &Array2<f64>,
    w: &Array2<f64>,
    config: &SolverConfig,
    restart: usize,
    mut observer: Option<&mut dyn FnMut(&IterationRecord)>,
) -> RestartOutcome {
    let (m, n) = x.dim();
    let Factorization { mut u, mut v } = initialize(n, m, config, restart);
    let initial = objective(x, &u, &v, w, config.lambda).unwrap_or(f64::NAN);
    let mut report = RestartReport {
        restart_id: restart,
        initial_objective: initial,
        final_objective: None,
        iterations: 0,
        converged: false,
        kkt_residual: None,
        ridge_fallbacks: 0,
        failure: None,
        objective_trace: vec![initial],
    };
    let fail = |mut report: RestartReport, why: String| {
        log::warn!("restart {restart} failed: {why}");
        report.failure = Some(why);
        RestartOutcome {
            report,
            factors: None,
        }
    };
    if !initial.is_finite() {
        return fail(report, "initial objective is not finite".into());
    }

    let mut prev = initial;
    let mut quiet = 0;
    for it in 1..=config.max_iter {
        u = match update_u(x, &u, &v, w, config.lambda, config.div_epsilon) {
            Ok(next) => next,
            Err(e) => return fail(report, format!("iteration {it}: {e}")),
        };
        let recon_before = observer.as_ref().map(|_| reconstruction_error(x, &u, &v));
        let step = match update_v_detailed(x, &u) {
            Ok(step) => step,
            Err(e) => return fail(report, format!("iteration {it}: {e}")),
        };
        if step.ridge_applied {
            report.ridge_fallbacks += 1;
        }
        v = step.v;
        let cur = match objective(x, &u, &v, w, config.lambda) {
            Ok(f) if f.is_finite() => f,
            _ => return fail(report, format!("iteration {it}: objective is not finite")),
        };
        report.objective_trace.push(cur);
        report.iterations = it;
        if let (Some(obs), Some(before)) = (observer.as_mut(), recon_before) {
            obs(&IterationRecord {
                restart,
                iteration: it,
                objective_before: prev,
                objective_after: cur,
                reconstruction_before_v: before,
                reconstruction_after_v: reconstruction_error(x, &u, &v),
                min_u: u.iter().cloned().fold(f64::INFINITY, f64::min),
                all_finite: u.iter().chain(v.iter()).all(|a| a.is_finite()),
            });
        }
        if relative_change(prev, cur) < config.tol {
            quiet += 1;
        } else {
            quiet = 0;
        }
        prev = cur;
        if quiet >= config.patience {
            report.converged = true;
            break;
        }
    }
    report.final_objective = Some(prev);
    report.kkt_residual = kkt_residual(x, &u, &v, w, config.lambda).ok();
    RestartOutcome {
        report,
        factors: Some(Factorization { u, v }),
    }
}

fn check_inputs(x: &Array2<f64>, w: &Array2<f64>, config: &SolverConfig) -> Result<()> {
    let (_, n) = x.dim();
    if w.dim() != (n, n) {
        return Err(Error::Dimension(format!(
            "X has {n} users but W̃ is {:?}",
            w.dim()
        )));
    }
    if x.iter().chain(w.iter()).any(|v| !v.is_finite()) {
        return Err(Error::invalid("X and W̃ must be finite"));
    }
    if w.iter().any(|&v| v < 0.0) {
        return Err(Error::invalid("W̃ must be nonnegative"));
    }
    config.validate(n)
}

fn select(outcomes: Vec<RestartOutcome>) -> Result<(Factorization, SolveDiagnostics)> {
    let best = outcomes
        .iter()
        .enumerate()
        .filter_map(|(i, o)| o.report.final_objective.map(|f| (i, f)))
        .fold(None::<(usize, f64)>, |acc, (i, f)| match acc {
            Some((_, bf)) if bf <= f => acc,
            _ => Some((i, f)),
        });
    let reports: Vec<RestartReport> = outcomes.iter().map(|o| o.report.clone()).collect();
    let Some((best, _)) = best else {
        return Err(Error::AllRestartsFailed(
            reports
                .iter()
                .map(|r| {
                    format!(
                        "restart {}: {}",
                        r.restart_id,
                        r.failure.as_deref().unwrap_or("unknown")
                    )
                })
                .collect(),
        ));
    };
    let mut outcomes = outcomes;
    let chosen = outcomes.swap_remove(best);
    let factors = chosen.factors.expect("successful restart has factors");
    let diagnostics = SolveDiagnostics {
        objective_trace: chosen.report.objective_trace.clone(),
        iterations_run: chosen.report.iterations,
        converged: chosen.report.converged,
        kkt_residual: chosen.report.kkt_residual.unwrap_or(f64::NAN),
        orthogonality_residual: orthogonality_residual(&factors.u),
        restart_id: chosen.report.restart_id,
        restarts: reports,
    };
    Ok((factors, diagnostics))
}

/// Alternates the `U` and `V` updates from `config.restarts` random starts
/// and keeps the run with the lowest final objective (lowest restart id on
/// ties). Restarts run in parallel; the result does not depend on thread
/// scheduling.
pub fn solve(
    x: &Array2<f64>,
    w_norm: &Array2<f64>,
    config: &SolverConfig,
) -> Result<(Factorization, SolveDiagnostics)> {
    check_inputs(x, w_norm, config)?;
    let outcomes: Vec<RestartOutcome> = (0..config.restarts)
        .into_par_iter()
        .map(|r| run_restart(x, w_norm, config, r, None))
        .collect();
    select(outcomes)
}

/// Same as [`solve`], but runs restarts sequentially and calls `observer`
/// after every iteration.
pub fn solve_observed(
    x: &Array2<f64>,
    w_norm: &Array2<f64>,
    config: &SolverConfig,
    observer: &mut dyn FnMut(&IterationRecord),
) -> Result<(Factorization, SolveDiagnostics)> {
    check_inputs(x, w_norm, config)?;
    let outcomes: Vec<RestartOutcome> = (0..config.restarts)
        .map(|r| run_restart(x, w_norm, config, r, Some(&mut *observer)))
        .collect();
    select(outcomes)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment {
    pub labels: Vec<usize>,
    /// Rows of `U` that are entirely zero; they land in community 0.
    pub degenerate_rows: Vec<usize>,
}

/// Each user goes to the column holding its largest membership; ties go to
/// the lowest column.
pub fn hard_assign(u: &Array2<f64>) -> Assignment {
    let mut labels = Vec::with_capacity(u.nrows());
    let mut degenerate_rows = Vec::new();
    for (i, row) in u.rows().into_iter().enumerate() {
        let mut best = 0;
        for (j, &val) in row.iter().enumerate() {
            if val > row[best] {
                best = j;
            }
        }
        if row.iter().all(|&val| val == 0.0) {
            degenerate_rows.push(i);
        }
        labels.push(best);
    }
    Assignment {
        labels,
        degenerate_rows,
    }
}
