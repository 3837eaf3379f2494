//! Interaction matrix `W` and its symmetric normalization
//! `W̃ = D^{-1/2} W D^{-1/2}`.

use std::fs::File;
use std::io::Read;
use std::path::Path;

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix_io::LabeledMatrix;
use crate::opinion::NameIndex;

#[derive(Debug, Clone, PartialEq)]
pub struct InteractionEvent {
    pub user_a: String,
    pub user_b: String,
    pub count: f64,
}

impl InteractionEvent {
    pub fn new(a: impl Into<String>, b: impl Into<String>, count: f64) -> Self {
        Self {
            user_a: a.into(),
            user_b: b.into(),
            count,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphReport {
    pub accepted: usize,
    pub unknown_user: usize,
    pub self_loops: usize,
    pub negative_count: usize,
}

#[derive(Debug, Clone)]
pub struct InteractionGraph {
    pub users: NameIndex,
    pub weights: Array2<f64>,
    pub degrees: Vec<f64>,
    pub normalized: Array2<f64>,
}

impl InteractionGraph {
    pub fn new(users: NameIndex, weights: Array2<f64>) -> Result<Self> {
        if weights.dim() != (users.len(), users.len()) {
            return Err(Error::Dimension(format!(
                "W is {:?} for {} users",
                weights.dim(),
                users.len()
            )));
        }
        let degrees = degrees(&weights);
        let normalized = symmetric_normalize(&weights)?;
        Ok(Self {
            users,
            weights,
            degrees,
            normalized,
        })
    }

    pub fn weights_labeled(&self) -> LabeledMatrix {
        self.labeled(self.weights.clone())
    }

    pub fn normalized_labeled(&self) -> LabeledMatrix {
        self.labeled(self.normalized.clone())
    }

    fn labeled(&self, values: Array2<f64>) -> LabeledMatrix {
        LabeledMatrix {
            corner: "user_id".into(),
            row_names: self.users.names().to_vec(),
            col_names: self.users.names().to_vec(),
            values,
        }
    }
}

/// Accumulates undirected interaction counts over the users in `users`.
/// Events naming unknown users, self-loops and negative counts are skipped
/// and tallied in the report.
pub fn build_interaction_matrix(
    events: &[InteractionEvent],
    users: &NameIndex,
) -> (Array2<f64>, GraphReport) {
    let n = users.len();
    let mut w = Array2::zeros((n, n));
    let mut report = GraphReport::default();
    for ev in events {
        if ev.count < 0.0 || !ev.count.is_finite() {
            report.negative_count += 1;
            continue;
        }
        let (Some(a), Some(b)) = (users.get(&ev.user_a), users.get(&ev.user_b)) else {
            report.unknown_user += 1;
            continue;
        };
        if a == b {
            report.self_loops += 1;
            continue;
        }
        w[[a, b]] += ev.count;
        w[[b, a]] += ev.count;
        report.accepted += 1;
    }
    if report.unknown_user + report.self_loops + report.negative_count > 0 {
        log::warn!(
            "interaction events skipped: {} unknown user, {} self-loop, {} invalid count",
            report.unknown_user,
            report.self_loops,
            report.negative_count
        );
    }
    (w, report)
}

pub fn degrees(w: &Array2<f64>) -> Vec<f64> {
    w.rows().into_iter().map(|r| r.sum()).collect()
}

/// `D^{-1/2} W D^{-1/2}`, with zero-degree nodes mapped to zero rows and
/// columns. Rejects non-square, asymmetric or negative input.
pub fn symmetric_normalize(w: &Array2<f64>) -> Result<Array2<f64>> {
    let (n, n2) = w.dim();
    if n != n2 {
        return Err(Error::Dimension(format!("W must be square, got {n}x{n2}")));
    }
    for i in 0..n {
        for j in 0..n {
            let v = w[[i, j]];
            if !v.is_finite() || v < 0.0 {
                return Err(Error::invalid(format!(
                    "W[{i},{j}] = {v} is not a nonnegative number"
                )));
            }
            if j > i && v != w[[j, i]] {
                return Err(Error::invalid(format!(
                    "W is not symmetric at ({i},{j}): {v} vs {}",
                    w[[j, i]]
                )));
            }
        }
    }
    let d = degrees(w);
    // w / sqrt(d_i d_j) keeps degree-regular graphs exact: W̃ = W / d.
    let mut out = w.clone();
    for ((i, j), v) in out.indexed_iter_mut() {
        if *v != 0.0 {
            *v /= (d[i] * d[j]).sqrt();
        }
    }
    Ok(out)
}

/// Parses `user_a,user_b[,count]` rows (count defaults to 1). A first row
/// starting with `user_a` is a header. Rows with unparsable or negative
/// counts are returned as rejected line numbers.
pub fn parse_edges<R: Read>(input: R) -> Result<(Vec<InteractionEvent>, Vec<usize>)> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input);
    let mut events = Vec::new();
    let mut rejected = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = i + 1;
        if i == 0 && rec.get(0) == Some("user_a") {
            continue;
        }
        if rec.iter().all(str::is_empty) {
            continue;
        }
        let count = match rec.len() {
            2 => Some(1.0),
            3 => rec[2]
                .parse::<f64>()
                .ok()
                .filter(|c| c.is_finite() && *c >= 0.0),
            _ => None,
        };
        match count {
            Some(c) if !rec[0].is_empty() && !rec[1].is_empty() => {
                events.push(InteractionEvent::new(&rec[0], &rec[1], c))
            }
            _ => rejected.push(line),
        }
    }
    Ok((events, rejected))
}

pub fn read_edges(path: impl AsRef<Path>) -> Result<(Vec<InteractionEvent>, Vec<usize>)> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_edges(file)
}
