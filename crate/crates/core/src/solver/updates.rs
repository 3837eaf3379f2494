//! The individual pieces of one alternating step: sign splitting, the
//! objective, the orthogonality multiplier Γ, the multiplicative `U`
//! update, the least-squares `V` update and the complementary-slackness
//! residual.

use nalgebra::DMatrix;
use ndarray::{Array2, Zip};

use crate::error::{Error, Result};

/// Condition number of `UᵀU` above which a ridge is added before solving.
pub const CONDITION_LIMIT: f64 = 1e12;
/// Ridge added to `UᵀU` when it is ill-conditioned.
pub const RIDGE: f64 = 1e-10;

/// `(A⁺, A⁻)` with `A⁺ = (|A| + A)/2`, `A⁻ = (|A| − A)/2`.
pub fn split_signs(a: &Array2<f64>) -> (Array2<f64>, Array2<f64>) {
    let plus = a.mapv(|v| (v.abs() + v) / 2.0);
    let minus = a.mapv(|v| (v.abs() - v) / 2.0);
    (plus, minus)
}

/// Shapes of one problem instance: `X` is m×n, `U` n×k, `V` m×k, `W̃` n×n.
fn check_dims(x: &Array2<f64>, u: &Array2<f64>, v: &Array2<f64>, w: &Array2<f64>) -> Result<()> {
    let (m, n) = x.dim();
    let k = u.ncols();
    let ok = u.nrows() == n && v.dim() == (m, k) && w.dim() == (n, n);
    if ok {
        Ok(())
    } else {
        Err(Error::Dimension(format!(
            "X {:?}, U {:?}, V {:?}, W̃ {:?}",
            x.dim(),
            u.dim(),
            v.dim(),
            w.dim()
        )))
    }
}

/// `‖X − V Uᵀ‖²_F`.
pub fn reconstruction_error(x: &Array2<f64>, u: &Array2<f64>, v: &Array2<f64>) -> f64 {
    let approx = v.dot(&u.t());
    Zip::from(x)
        .and(&approx)
        .fold(0.0, |acc, &a, &b| acc + (a - b) * (a - b))
}

/// `Tr(Uᵀ W̃ U)`.
pub fn graph_trace(u: &Array2<f64>, w: &Array2<f64>) -> f64 {
    let wu = w.dot(u);
    Zip::from(u).and(&wu).fold(0.0, |acc, &a, &b| acc + a * b)
}

/// The two terms of the objective, kept apart for reporting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectiveParts {
    pub reconstruction: f64,
    pub trace: f64,
}

impl ObjectiveParts {
    pub fn value(&self, lambda: f64) -> f64 {
        self.reconstruction - lambda * self.trace
    }
}

pub fn objective_parts(
    x: &Array2<f64>,
    u: &Array2<f64>,
    v: &Array2<f64>,
    w: &Array2<f64>,
) -> Result<ObjectiveParts> {
    check_dims(x, u, v, w)?;
    Ok(ObjectiveParts {
        reconstruction: reconstruction_error(x, u, v),
        trace: graph_trace(u, w),
    })
}

/// `F = ‖X − V Uᵀ‖²_F − λ·Tr(Uᵀ W̃ U)`.
pub fn objective(
    x: &Array2<f64>,
    u: &Array2<f64>,
    v: &Array2<f64>,
    w: &Array2<f64>,
    lambda: f64,
) -> Result<f64> {
    Ok(objective_parts(x, u, v, w)?.value(lambda))
}

/// Products shared by Γ, the `U` update and the residual.
struct Products {
    xtv: Array2<f64>,
    vtv: Array2<f64>,
    wu: Array2<f64>,
    gamma: Array2<f64>,
}

fn products(
    x: &Array2<f64>,
    u: &Array2<f64>,
    v: &Array2<f64>,
    w: &Array2<f64>,
    lambda: f64,
) -> Products {
    let xtv = x.t().dot(v);
    let vtv = v.t().dot(v);
    let wu = w.dot(u);
    let gamma = u.t().dot(&xtv) - &vtv + &(u.t().dot(&wu) * lambda);
    Products {
        xtv,
        vtv,
        wu,
        gamma,
    }
}

/// `Γ = Uᵀ Xᵀ V − Vᵀ V + λ Uᵀ W̃ U` (k×k).
pub fn compute_gamma(
    x: &Array2<f64>,
    u: &Array2<f64>,
    v: &Array2<f64>,
    w: &Array2<f64>,
    lambda: f64,
) -> Result<Array2<f64>> {
    check_dims(x, u, v, w)?;
    Ok(products(x, u, v, w, lambda).gamma)
}

/// One multiplicative step on `U`:
///
/// ```text
/// U ⊙ sqrt( [(XᵀV)⁺ + U(VᵀV)⁻ + λW̃U + UΓ⁻] / [(XᵀV)⁻ + U(VᵀV)⁺ + UΓ⁺ + ε] )
/// ```
///
/// The split of `VᵀV` and `Γ` happens before multiplying by `U`.
pub fn update_u(
    x: &Array2<f64>,
    u: &Array2<f64>,
    v: &Array2<f64>,
    w: &Array2<f64>,
    lambda: f64,
    div_epsilon: f64,
) -> Result<Array2<f64>> {
    check_dims(x, u, v, w)?;
    let p = products(x, u, v, w, lambda);
    let (xtv_p, xtv_m) = split_signs(&p.xtv);
    let (vtv_p, vtv_m) = split_signs(&p.vtv);
    let (gam_p, gam_m) = split_signs(&p.gamma);

    let numer = xtv_p + u.dot(&vtv_m) + p.wu * lambda + u.dot(&gam_m);
    let denom = xtv_m + u.dot(&vtv_p) + u.dot(&gam_p);

    let mut next = u.clone();
    Zip::from(&mut next)
        .and(&numer)
        .and(&denom)
        .for_each(|out, &n, &d| *out *= (n / (d + div_epsilon)).sqrt());
    if let Some(((i, j), bad)) = next.indexed_iter().find(|(_, v)| !v.is_finite()) {
        return Err(Error::Numerical(format!(
            "U update produced {bad} at ({i},{j})"
        )));
    }
    Ok(next)
}

/// Outcome of a `V` step.
#[derive(Debug, Clone)]
pub struct VUpdate {
    pub v: Array2<f64>,
    /// 2-norm condition number of `UᵀU` before any ridge.
    pub condition: f64,
    pub ridge_applied: bool,
}

/// `V = X U (UᵀU)^{-1}`, solved through a Cholesky factorization of the
/// k×k Gram matrix. When its condition number exceeds
/// [`CONDITION_LIMIT`] (or it is singular) a ridge of [`RIDGE`]·I is added.
pub fn update_v_detailed(x: &Array2<f64>, u: &Array2<f64>) -> Result<VUpdate> {
    if x.ncols() != u.nrows() {
        return Err(Error::Dimension(format!(
            "X {:?} vs U {:?}",
            x.dim(),
            u.dim()
        )));
    }
    let k = u.ncols();
    let gram = u.t().dot(u);
    let xu = x.dot(u);
    let mut g = DMatrix::from_fn(k, k, |i, j| gram[[i, j]]);
    if g.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical("UᵀU has non-finite entries".into()));
    }

    let eig = g.clone().symmetric_eigen();
    let max = eig
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    let min = eig
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    let condition = if min > 0.0 { max / min } else { f64::INFINITY };
    let ridge_applied = condition.is_nan() || condition > CONDITION_LIMIT;
    if ridge_applied {
        for i in 0..k {
            g[(i, i)] += RIDGE;
        }
    }
    let chol = g
        .cholesky()
        .ok_or_else(|| Error::Numerical(format!("UᵀU is singular (condition {condition:e})")))?;
    // V (UᵀU) = XU  ⇔  (UᵀU) Vᵀ = (XU)ᵀ since UᵀU is symmetric.
    let rhs = DMatrix::from_fn(k, xu.nrows(), |i, j| xu[[j, i]]);
    let vt = chol.solve(&rhs);
    let v = Array2::from_shape_fn((xu.nrows(), k), |(i, j)| vt[(j, i)]);
    if v.iter().any(|a| !a.is_finite()) {
        return Err(Error::Numerical(
            "V update produced non-finite values".into(),
        ));
    }
    Ok(VUpdate {
        v,
        condition,
        ridge_applied,
    })
}

pub fn update_v(x: &Array2<f64>, u: &Array2<f64>) -> Result<Array2<f64>> {
    update_v_detailed(x, u).map(|r| r.v)
}

/// `‖(−XᵀV + U VᵀV − λ W̃U + UΓ) ⊙ U‖_F / (1 + ‖U‖_F)`: how far `U` is
/// from complementary slackness.
pub fn kkt_residual(
    x: &Array2<f64>,
    u: &Array2<f64>,
    v: &Array2<f64>,
    w: &Array2<f64>,
    lambda: f64,
) -> Result<f64> {
    check_dims(x, u, v, w)?;
    let p = products(x, u, v, w, lambda);
    let grad = -p.xtv + u.dot(&p.vtv) - p.wu * lambda + u.dot(&p.gamma);
    let slack = Zip::from(&grad)
        .and(u)
        .fold(0.0, |acc, &g, &a| acc + (g * a) * (g * a));
    Ok(slack.sqrt() / (1.0 + frobenius(u)))
}

pub fn frobenius(a: &Array2<f64>) -> f64 {
    a.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// `‖UᵀU − I‖_F`.
pub fn orthogonality_residual(u: &Array2<f64>) -> f64 {
    let mut g = u.t().dot(u);
    for i in 0..g.nrows() {
        g[[i, i]] -= 1.0;
    }
    frobenius(&g)
}
