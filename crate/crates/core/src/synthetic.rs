//! Planted-partition benchmark instances.
//!
//! Users are split into `k` communities. Interaction counts follow a
//! two-probability block model with `1 + Poisson(mean)` weights, and each
//! community carries a signed signature over the expressions that its
//! members' opinion columns repeat (plus Gaussian noise and random
//! zeroing).

use std::fs;
use std::path::Path;

use ndarray::Array2;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix_io::{write_labels, LabeledMatrix};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PlantedConfig {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    /// Community shares; uniform when absent.
    pub proportions: Option<Vec<f64>>,
    pub p_in: f64,
    pub p_out: f64,
    pub edge_weight_mean: f64,
    pub signature_density: f64,
    pub signal_strength: f64,
    pub noise_std: f64,
    pub sparsity: f64,
    pub seed: u64,
}

impl Default for PlantedConfig {
    fn default() -> Self {
        Self {
            n: 200,
            m: 60,
            k: 3,
            proportions: None,
            p_in: 0.3,
            p_out: 0.01,
            edge_weight_mean: 1.0,
            signature_density: 0.5,
            signal_strength: 3.0,
            noise_std: 0.5,
            sparsity: 0.5,
            seed: 7,
        }
    }
}

impl PlantedConfig {
    pub fn shares(&self) -> Vec<f64> {
        self.proportions
            .clone()
            .unwrap_or_else(|| vec![1.0 / self.k as f64; self.k])
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: &str| Err(Error::invalid(format!("planted config: {msg}")));
        let unit = |p: f64| (0.0..=1.0).contains(&p);
        if self.k == 0 || self.n == 0 || self.m == 0 {
            return fail("n, m and k must be positive");
        }
        if self.k > self.n {
            return fail("k exceeds n");
        }
        if !(unit(self.p_out) && unit(self.p_in) && self.p_out <= self.p_in) {
            return fail("need 0 <= p_out <= p_in <= 1");
        }
        if !(self.edge_weight_mean > 0.0 && self.edge_weight_mean.is_finite()) {
            return fail("edge_weight_mean must be positive");
        }
        if !unit(self.signature_density) || !unit(self.sparsity) {
            return fail("signature_density and sparsity must lie in [0,1]");
        }
        if !(self.signal_strength > 0.0 && self.signal_strength.is_finite()) {
            return fail("signal_strength must be positive");
        }
        if !(self.noise_std >= 0.0 && self.noise_std.is_finite()) {
            return fail("noise_std must be nonnegative");
        }
        let shares = self.shares();
        if shares.len() != self.k || shares.iter().any(|&p| p.is_nan() || p < 0.0) {
            return fail("proportions must be k nonnegative numbers");
        }
        if (shares.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return fail("proportions must sum to 1");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlantedInstance {
    /// m×n opinions.
    pub x: Array2<f64>,
    /// n×n interaction counts, symmetric with zero diagonal.
    pub w: Array2<f64>,
    pub labels: Vec<usize>,
    /// k×m entries in {−1, 0, 1}.
    pub signatures: Array2<f64>,
}

/// Community sizes from largest-remainder rounding of `shares · n`.
fn community_sizes(shares: &[f64], n: usize) -> Vec<usize> {
    let raw: Vec<f64> = shares.iter().map(|p| p * n as f64).collect();
    let mut sizes: Vec<usize> = raw.iter().map(|r| r.floor() as usize).collect();
    let mut order: Vec<usize> = (0..shares.len()).collect();
    order.sort_by(|&a, &b| {
        let fa = raw[a] - raw[a].floor();
        let fb = raw[b] - raw[b].floor();
        fb.total_cmp(&fa).then(a.cmp(&b))
    });
    let short = n - sizes.iter().sum::<usize>();
    for &c in order.iter().cycle().take(short) {
        sizes[c] += 1;
    }
    sizes
}

/// Deterministic in `config.seed`.
pub fn generate(config: &PlantedConfig) -> Result<PlantedInstance> {
    config.validate()?;
    let (n, m, k) = (config.n, config.m, config.k);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    // Exact proportional allocation, then a random order.
    let mut labels: Vec<usize> = community_sizes(&config.shares(), n)
        .into_iter()
        .enumerate()
        .flat_map(|(c, size)| std::iter::repeat_n(c, size))
        .collect();
    labels.shuffle(&mut rng);

    let poisson = Poisson::new(config.edge_weight_mean)
        .map_err(|e| Error::invalid(format!("edge_weight_mean: {e}")))?;
    let mut w = Array2::zeros((n, n));
    for i in 0..n {
        for j in (i + 1)..n {
            let p = if labels[i] == labels[j] {
                config.p_in
            } else {
                config.p_out
            };
            if rng.random_bool(p) {
                let weight = 1.0 + poisson.sample(&mut rng);
                w[[i, j]] = weight;
                w[[j, i]] = weight;
            }
        }
    }

    let nnz = (config.signature_density * m as f64).round() as usize;
    let mut signatures = Array2::zeros((k, m));
    for c in 0..k {
        let mut signs: Vec<f64> = (0..nnz)
            .map(|i| if i % 2 == 0 { 1.0 } else { -1.0 })
            .collect();
        signs.shuffle(&mut rng);
        let positions = rand::seq::index::sample(&mut rng, m, nnz);
        for (pos, sign) in positions.into_iter().zip(signs) {
            signatures[[c, pos]] = sign;
        }
    }

    let noise = Normal::new(0.0, config.noise_std)
        .map_err(|e| Error::invalid(format!("noise_std: {e}")))?;
    let mut x = Array2::zeros((m, n));
    for i in 0..n {
        for l in 0..m {
            let mut value = config.signal_strength * signatures[[labels[i], l]];
            if config.noise_std > 0.0 {
                value += noise.sample(&mut rng);
            }
            x[[l, i]] = value;
        }
    }
    if config.sparsity > 0.0 {
        for v in x.iter_mut() {
            if rng.random_bool(config.sparsity) {
                *v = 0.0;
            }
        }
    }

    Ok(PlantedInstance {
        x,
        w,
        labels,
        signatures,
    })
}

impl PlantedInstance {
    pub fn user_ids(&self) -> Vec<String> {
        let width = digits(self.labels.len());
        (0..self.labels.len())
            .map(|i| format!("u{i:0width$}"))
            .collect()
    }

    pub fn expression_ids(&self) -> Vec<String> {
        let width = digits(self.x.nrows());
        (0..self.x.nrows())
            .map(|l| format!("e{l:0width$}"))
            .collect()
    }

    pub fn x_labeled(&self) -> LabeledMatrix {
        LabeledMatrix {
            corner: "expression".into(),
            row_names: self.expression_ids(),
            col_names: self.user_ids(),
            values: self.x.clone(),
        }
    }

    pub fn w_labeled(&self) -> LabeledMatrix {
        LabeledMatrix {
            corner: "user_id".into(),
            row_names: self.user_ids(),
            col_names: self.user_ids(),
            values: self.w.clone(),
        }
    }

    /// Writes `X.csv`, `W.csv` and `labels.csv` into `dir`.
    pub fn write_dir(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        self.x_labeled().write_csv(dir.join("X.csv"))?;
        self.w_labeled().write_csv(dir.join("W.csv"))?;
        write_labels(
            dir.join("labels.csv"),
            self.user_ids().into_iter().zip(self.labels.iter()),
        )
    }
}

fn digits(count: usize) -> usize {
    count.saturating_sub(1).max(1).to_string().len()
}
