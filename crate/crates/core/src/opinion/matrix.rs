use std::collections::{BTreeMap, HashMap, HashSet};

use ndarray::Array2;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix_io::LabeledMatrix;

use super::attribute::attribute_sentiment;
use super::extract::extract_key_expressions;
use super::lexicon::Lexicon;
use super::tagger::Tagger;
use super::tokenize::tokenize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Message {
    pub user_id: String,
    pub text: String,
}

impl Message {
    pub fn new(user_id: impl Into<String>, text: impl Into<String>) -> Result<Self> {
        let user_id = user_id.into();
        if user_id.is_empty() {
            return Err(Error::invalid("message user_id is empty"));
        }
        Ok(Self {
            user_id,
            text: text.into(),
        })
    }
}

/// Bijection between names and `0..len`, in insertion order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NameIndex {
    names: Vec<String>,
    positions: HashMap<String, usize>,
}

impl NameIndex {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_names<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut idx = Self::new();
        for name in names {
            let name = name.into();
            if idx.get(&name).is_some() {
                return Err(Error::invalid(format!("duplicate name {name:?}")));
            }
            idx.intern(&name);
        }
        Ok(idx)
    }

    pub fn intern(&mut self, name: &str) -> usize {
        if let Some(&i) = self.positions.get(name) {
            return i;
        }
        let i = self.names.len();
        self.names.push(name.to_string());
        self.positions.insert(name.to_string(), i);
        i
    }

    pub fn get(&self, name: &str) -> Option<usize> {
        self.positions.get(name).copied()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

/// Signed expressions × users matrix, stored sparsely.
///
/// Cells hold the sum of every attribution event for that
/// (expression, user) pair. Cells whose events cancel exactly are kept
/// but count as zero everywhere.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct OpinionMatrix {
    pub expressions: NameIndex,
    pub users: NameIndex,
    cells: BTreeMap<(usize, usize), f64>,
}

impl OpinionMatrix {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `value` to the cell for (`expression`, `user`), creating the row
    /// and column if needed.
    pub fn add(&mut self, expression: &str, user: &str, value: f64) {
        let r = self.expressions.intern(expression);
        let c = self.users.intern(user);
        *self.cells.entry((r, c)).or_insert(0.0) += value;
    }

    pub fn get(&self, expression: &str, user: &str) -> f64 {
        match (self.expressions.get(expression), self.users.get(user)) {
            (Some(r), Some(c)) => self.cells.get(&(r, c)).copied().unwrap_or(0.0),
            _ => 0.0,
        }
    }

    /// (m, n): number of expressions and users.
    pub fn shape(&self) -> (usize, usize) {
        (self.expressions.len(), self.users.len())
    }

    pub fn is_empty(&self) -> bool {
        self.expressions.is_empty() || self.users.is_empty()
    }

    pub fn nonzeros(&self) -> impl Iterator<Item = ((usize, usize), f64)> + '_ {
        self.cells
            .iter()
            .filter(|(_, &v)| v != 0.0)
            .map(|(&k, &v)| (k, v))
    }

    pub fn nnz(&self) -> usize {
        self.nonzeros().count()
    }

    pub fn to_dense(&self) -> Array2<f64> {
        let (m, n) = self.shape();
        let mut x = Array2::zeros((m, n));
        for (&(r, c), &v) in &self.cells {
            x[[r, c]] = v;
        }
        x
    }

    pub fn to_labeled(&self) -> LabeledMatrix {
        LabeledMatrix {
            corner: "expression".into(),
            row_names: self.expressions.names().to_vec(),
            col_names: self.users.names().to_vec(),
            values: self.to_dense(),
        }
    }

    pub fn from_labeled(m: &LabeledMatrix) -> Result<Self> {
        let expressions = NameIndex::from_names(m.row_names.iter().cloned())?;
        let users = NameIndex::from_names(m.col_names.iter().cloned())?;
        let mut cells = BTreeMap::new();
        for ((r, c), &v) in m.values.indexed_iter() {
            if v != 0.0 {
                cells.insert((r, c), v);
            }
        }
        Ok(Self {
            expressions,
            users,
            cells,
        })
    }
}

/// Attribution events of a single message, with stopword expressions
/// removed.
pub fn message_events(
    text: &str,
    tagger: &dyn Tagger,
    lexicon: &Lexicon,
    window: usize,
    stopwords: &HashSet<String>,
) -> Vec<(String, i32)> {
    let mut tokens = tokenize(text);
    tagger.tag(&mut tokens);
    let occurrences = extract_key_expressions(&tokens);
    attribute_sentiment(&tokens, &occurrences, lexicon, window)
        .into_iter()
        .filter(|(expr, _)| !stopwords.contains(expr))
        .collect()
}

/// Builds `X` with the default heuristic tagger and no common-noun list.
pub fn build_opinion_matrix(
    messages: &[Message],
    lexicon: &Lexicon,
    window: usize,
    stopwords: &HashSet<String>,
) -> Result<OpinionMatrix> {
    let tagger = super::tagger::HeuristicTagger::default();
    build_opinion_matrix_with(messages, &tagger, lexicon, window, stopwords)
}

/// Runs the per-message pipeline in parallel and merges the events into `X`
/// in message order, so row and column order follow first appearance.
pub fn build_opinion_matrix_with(
    messages: &[Message],
    tagger: &dyn Tagger,
    lexicon: &Lexicon,
    window: usize,
    stopwords: &HashSet<String>,
) -> Result<OpinionMatrix> {
    if window == 0 {
        return Err(Error::invalid("window must be at least 1"));
    }
    let stopwords: HashSet<String> = stopwords.iter().map(|s| super::fold(s)).collect();
    let per_message: Vec<Vec<(String, i32)>> = messages
        .par_iter()
        .map(|msg| message_events(&msg.text, tagger, lexicon, window, &stopwords))
        .collect();
    let mut x = OpinionMatrix::new();
    for (msg, events) in messages.iter().zip(per_message) {
        for (expr, strength) in events {
            x.add(&expr, &msg.user_id, f64::from(strength));
        }
    }
    Ok(x)
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterReport {
    pub min_users_per_expr: usize,
    pub min_exprs_per_user: usize,
    pub rounds: usize,
    pub removed_expressions: usize,
    pub removed_users: usize,
    /// Set when nothing survived the thresholds.
    pub empty: bool,
}

/// Drops expressions used by fewer than `min_users_per_expr` users, then
/// users with fewer than `min_exprs_per_user` expressions, repeating until
/// nothing changes. Indexes are recompacted preserving relative order.
pub fn filter_matrix(
    x: &OpinionMatrix,
    min_users_per_expr: usize,
    min_exprs_per_user: usize,
) -> (OpinionMatrix, FilterReport) {
    let (m, n) = x.shape();
    let mut row_alive = vec![true; m];
    let mut col_alive = vec![true; n];
    let nz: Vec<(usize, usize)> = x.nonzeros().map(|(k, _)| k).collect();
    let mut rounds = 0;
    loop {
        rounds += 1;
        let mut changed = false;

        let mut row_count = vec![0usize; m];
        for &(r, c) in &nz {
            if row_alive[r] && col_alive[c] {
                row_count[r] += 1;
            }
        }
        for r in 0..m {
            if row_alive[r] && row_count[r] < min_users_per_expr {
                row_alive[r] = false;
                changed = true;
            }
        }

        let mut col_count = vec![0usize; n];
        for &(r, c) in &nz {
            if row_alive[r] && col_alive[c] {
                col_count[c] += 1;
            }
        }
        for c in 0..n {
            if col_alive[c] && col_count[c] < min_exprs_per_user {
                col_alive[c] = false;
                changed = true;
            }
        }

        if !changed {
            break;
        }
    }

    let mut out = OpinionMatrix::new();
    let mut row_map = vec![None; m];
    for r in (0..m).filter(|&r| row_alive[r]) {
        row_map[r] = Some(out.expressions.intern(x.expressions.name(r)));
    }
    let mut col_map = vec![None; n];
    for c in (0..n).filter(|&c| col_alive[c]) {
        col_map[c] = Some(out.users.intern(x.users.name(c)));
    }
    for ((r, c), v) in x.nonzeros() {
        if let (Some(nr), Some(nc)) = (row_map[r], col_map[c]) {
            out.cells.insert((nr, nc), v);
        }
    }
    let report = FilterReport {
        min_users_per_expr,
        min_exprs_per_user,
        rounds,
        removed_expressions: m - out.expressions.len(),
        removed_users: n - out.users.len(),
        empty: out.is_empty(),
    };
    if report.empty {
        log::warn!(
            "filtering with thresholds ({min_users_per_expr}, {min_exprs_per_user}) left an empty matrix"
        );
    }
    (out, report)
}
