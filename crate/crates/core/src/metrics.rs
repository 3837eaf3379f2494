//! External clustering scores: NMI, ARI and purity.
//!
//! NMI uses the geometric-mean normalization `I(a;b) / sqrt(H(a)·H(b))`
//! with natural logarithms. When both partitions consist of a single
//! cluster the score is 1; otherwise a zero entropy on either side gives 0.

use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A hard partition of `n > 0` items. Ids need not be contiguous.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledPartition {
    labels: Vec<i64>,
}

impl LabeledPartition {
    pub fn new(labels: Vec<i64>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::invalid("partition is empty"));
        }
        Ok(Self { labels })
    }

    pub fn from_usize(labels: &[usize]) -> Result<Self> {
        Self::new(labels.iter().map(|&l| l as i64).collect())
    }

    /// Maps arbitrary label values to dense ids in order of first
    /// appearance.
    pub fn from_values<T: Eq + Hash + Clone>(values: &[T]) -> Result<Self> {
        let mut ids: HashMap<T, i64> = HashMap::new();
        let labels = values
            .iter()
            .map(|v| {
                let next = ids.len() as i64;
                *ids.entry(v.clone()).or_insert(next)
            })
            .collect();
        Self::new(labels)
    }

    pub fn labels(&self) -> &[i64] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

struct Contingency {
    n: usize,
    cells: BTreeMap<(i64, i64), usize>,
    a_sizes: BTreeMap<i64, usize>,
    b_sizes: BTreeMap<i64, usize>,
}

fn contingency(a: &LabeledPartition, b: &LabeledPartition) -> Result<Contingency> {
    if a.len() != b.len() {
        return Err(Error::Dimension(format!(
            "partitions have lengths {} and {}",
            a.len(),
            b.len()
        )));
    }
    let mut cells = BTreeMap::new();
    let mut a_sizes = BTreeMap::new();
    let mut b_sizes = BTreeMap::new();
    for (&x, &y) in a.labels.iter().zip(&b.labels) {
        *cells.entry((x, y)).or_insert(0) += 1;
        *a_sizes.entry(x).or_insert(0) += 1;
        *b_sizes.entry(y).or_insert(0) += 1;
    }
    Ok(Contingency {
        n: a.len(),
        cells,
        a_sizes,
        b_sizes,
    })
}

/// Sums in ascending order so the result does not depend on how clusters
/// are numbered.
fn ordered_sum(mut terms: Vec<f64>) -> f64 {
    terms.sort_by(f64::total_cmp);
    terms.into_iter().sum()
}

fn entropy(sizes: &BTreeMap<i64, usize>, n: f64) -> f64 {
    ordered_sum(
        sizes
            .values()
            .map(|&c| {
                let p = c as f64 / n;
                -p * p.ln()
            })
            .collect(),
    )
}

/// Normalized mutual information in [0, 1].
pub fn nmi(a: &LabeledPartition, b: &LabeledPartition) -> Result<f64> {
    let t = contingency(a, b)?;
    // Identical up to relabeling: every cluster maps one-to-one.
    if t.cells.len() == t.a_sizes.len() && t.cells.len() == t.b_sizes.len() {
        return Ok(1.0);
    }
    let n = t.n as f64;
    let ha = entropy(&t.a_sizes, n);
    let hb = entropy(&t.b_sizes, n);
    if ha == 0.0 || hb == 0.0 {
        return Ok(0.0);
    }
    let mi = ordered_sum(
        t.cells
            .iter()
            .map(|(&(x, y), &c)| {
                let pxy = c as f64 / n;
                let px = t.a_sizes[&x] as f64 / n;
                let py = t.b_sizes[&y] as f64 / n;
                pxy * (pxy / (px * py)).ln()
            })
            .collect(),
    );
    let (lo, hi) = if ha <= hb { (ha, hb) } else { (hb, ha) };
    Ok((mi / (lo * hi).sqrt()).clamp(0.0, 1.0))
}

fn pairs(c: usize) -> i128 {
    let c = c as i128;
    c * (c - 1) / 2
}

/// Adjusted Rand index in [−1, 1].
///
/// Pair counts are kept as integers and combined into a single division,
/// so results such as −1/2 come out exact.
pub fn ari(a: &LabeledPartition, b: &LabeledPartition) -> Result<f64> {
    let t = contingency(a, b)?;
    if t.cells.len() == t.a_sizes.len() && t.cells.len() == t.b_sizes.len() {
        return Ok(1.0);
    }
    let index: i128 = t.cells.values().map(|&c| pairs(c)).sum();
    let sum_a: i128 = t.a_sizes.values().map(|&c| pairs(c)).sum();
    let sum_b: i128 = t.b_sizes.values().map(|&c| pairs(c)).sum();
    let total = pairs(t.n);
    // (index − sa·sb/total) / ((sa+sb)/2 − sa·sb/total), scaled by 2·total.
    let numer = 2 * index * total - 2 * sum_a * sum_b;
    let denom = (sum_a + sum_b) * total - 2 * sum_a * sum_b;
    if denom == 0 {
        return Ok(0.0);
    }
    Ok(numer as f64 / denom as f64)
}

/// Fraction of items whose predicted cluster's majority truth class they
/// belong to.
pub fn purity(pred: &LabeledPartition, truth: &LabeledPartition) -> Result<f64> {
    let t = contingency(pred, truth)?;
    let mut best: BTreeMap<i64, usize> = BTreeMap::new();
    for (&(p, _), &c) in &t.cells {
        let e = best.entry(p).or_insert(0);
        *e = (*e).max(c);
    }
    Ok(best.values().sum::<usize>() as f64 / t.n as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scores {
    pub nmi: f64,
    pub ari: f64,
    pub purity: f64,
}

pub fn score(pred: &LabeledPartition, truth: &LabeledPartition) -> Result<Scores> {
    Ok(Scores {
        nmi: nmi(pred, truth)?,
        ari: ari(pred, truth)?,
        purity: purity(pred, truth)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(l: &[i64]) -> LabeledPartition {
        LabeledPartition::new(l.to_vec()).unwrap()
    }

    #[test]
    fn nmi_is_bit_stable() {
        let a: Vec<i64> = (0..300).map(|i| (i * 7 % 11) % 5).collect();
        let b: Vec<i64> = (0..300).map(|i| (i * 13 % 17) % 4).collect();
        let first = nmi(&p(&a), &p(&b)).unwrap();
        for _ in 0..50 {
            assert_eq!(nmi(&p(&a), &p(&b)).unwrap().to_bits(), first.to_bits());
        }
    }

    #[test]
    fn nmi_examples() {
        assert_eq!(nmi(&p(&[0, 0, 1, 1]), &p(&[1, 1, 0, 0])).unwrap(), 1.0);
        assert_eq!(nmi(&p(&[0, 0, 1, 1]), &p(&[0, 1, 0, 1])).unwrap(), 0.0);
        assert_eq!(nmi(&p(&[3, 3, 3]), &p(&[7, 7, 7])).unwrap(), 1.0);
        assert_eq!(nmi(&p(&[0, 0, 0, 0]), &p(&[0, 0, 1, 1])).unwrap(), 0.0);
    }

    #[test]
    fn nmi_against_hand_entropy() {
        // a = [0,0,1,1,1], b = [0,0,0,1,1]
        // cells: (0,0)=2, (1,0)=1, (1,1)=2; H(a)=H(b)=H(2/5,3/5).
        let h: f64 = -(0.4f64 * 0.4f64.ln() + 0.6 * 0.6f64.ln());
        let mi = 0.4 * (0.4f64 / (0.4 * 0.6)).ln()
            + 0.2 * (0.2f64 / (0.6 * 0.6)).ln()
            + 0.4 * (0.4f64 / (0.6 * 0.4)).ln();
        let got = nmi(&p(&[0, 0, 1, 1, 1]), &p(&[0, 0, 0, 1, 1])).unwrap();
        assert!((got - mi / h).abs() < 1e-12);
    }

    #[test]
    fn ari_examples() {
        assert_eq!(ari(&p(&[0, 0, 1, 1]), &p(&[0, 0, 1, 1])).unwrap(), 1.0);
        assert_eq!(ari(&p(&[0, 0, 1, 1]), &p(&[0, 1, 0, 1])).unwrap(), -0.5);
    }

    #[test]
    fn purity_examples() {
        let truth = LabeledPartition::from_values(&["A", "A", "B", "B", "B"]).unwrap();
        assert_eq!(purity(&p(&[0, 0, 0, 1, 1]), &truth).unwrap(), 0.8);
        assert_eq!(
            purity(&p(&[0, 0, 0, 0, 0, 0]), &p(&[0, 0, 1, 1, 2, 2])).unwrap(),
            1.0 / 3.0
        );
    }

    #[test]
    fn errors() {
        assert!(LabeledPartition::new(vec![]).is_err());
        assert!(nmi(&p(&[0]), &p(&[0, 1])).is_err());
        assert!(ari(&p(&[0]), &p(&[0, 1])).is_err());
        assert!(purity(&p(&[0]), &p(&[0, 1])).is_err());
    }
}
