//! External cluster-validity metrics: precision, recall, F, purity, inverse
//! purity and Purity-F.
//!
//! | Metric | Sum over | Weight | Inner max over |
//! |--------|----------|--------|----------------|
//! | [`purity`] | clusters C | \|C\|/n | labels, precision(C, L) |
//! | [`inverse_purity`] | labels L | \|L\|/n | clusters, recall(C, L) |
//! | [`purity_f`] | labels L | \|L\|/n | clusters, F(C, L) |

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::cluster::ClusterSet;
use crate::error::{domain, Result};

fn intersection_len(c: &BTreeSet<usize>, l: &BTreeSet<usize>) -> usize {
    c.intersection(l).count()
}

/// |c ∩ l| / |c|.
pub fn precision(c: &BTreeSet<usize>, l: &BTreeSet<usize>) -> Result<f64> {
    if c.is_empty() {
        return domain("precision of an empty cluster");
    }
    Ok(intersection_len(c, l) as f64 / c.len() as f64)
}

/// |c ∩ l| / |l|, i.e. `precision(l, c)`.
pub fn recall(c: &BTreeSet<usize>, l: &BTreeSet<usize>) -> Result<f64> {
    if l.is_empty() {
        return domain("recall against an empty label class");
    }
    precision(l, c)
}

fn harmonic(p: f64, r: f64) -> f64 {
    if p + r == 0.0 {
        0.0
    } else {
        2.0 * r * p / (r + p)
    }
}

/// Harmonic mean of precision and recall; 0 for disjoint sets.
pub fn f_pair(c: &BTreeSet<usize>, l: &BTreeSet<usize>) -> Result<f64> {
    Ok(harmonic(precision(c, l)?, recall(c, l)?))
}

/// Cluster/label overlap counts.
struct Contingency {
    n: usize,
    cluster_sizes: Vec<usize>,
    label_sizes: Vec<usize>,
    /// `overlap[k][l]` = |C_k ∩ L_l|
    overlap: Vec<Vec<usize>>,
}

impl Contingency {
    fn new(clusters: &ClusterSet, labels: &ClusterSet) -> Result<Self> {
        clusters.check_same_universe(labels)?;
        let label_of: BTreeMap<usize, usize> = labels.assignment();
        let nl = labels.len();
        let overlap: Vec<Vec<usize>> = clusters
            .clusters()
            .iter()
            .map(|c| {
                let mut row = vec![0; nl];
                for id in c {
                    row[label_of[id] - 1] += 1;
                }
                row
            })
            .collect();
        Ok(Self {
            n: clusters.num_items(),
            cluster_sizes: clusters.clusters().iter().map(Vec::len).collect(),
            label_sizes: labels.clusters().iter().map(Vec::len).collect(),
            overlap,
        })
    }

    fn precision(&self, k: usize, l: usize) -> f64 {
        self.overlap[k][l] as f64 / self.cluster_sizes[k] as f64
    }

    fn recall(&self, k: usize, l: usize) -> f64 {
        self.overlap[k][l] as f64 / self.label_sizes[l] as f64
    }

    // Size-weighted terms are summed before the single division by n, so a
    // perfect match scores exactly 1.
    fn purity(&self) -> f64 {
        let n = self.n as f64;
        (0..self.cluster_sizes.len())
            .map(|k| {
                let best = (0..self.label_sizes.len())
                    .map(|l| self.precision(k, l))
                    .fold(0.0, f64::max);
                self.cluster_sizes[k] as f64 * best
            })
            .sum::<f64>()
            / n
    }

    /// Sum over labels of |L|/n times the best `score(k, l)` over clusters.
    fn label_weighted(&self, score: impl Fn(usize, usize) -> f64) -> f64 {
        let n = self.n as f64;
        (0..self.label_sizes.len())
            .map(|l| {
                let best = (0..self.cluster_sizes.len())
                    .map(|k| score(k, l))
                    .fold(0.0, f64::max);
                self.label_sizes[l] as f64 * best
            })
            .sum::<f64>()
            / n
    }

    fn inverse_purity(&self) -> f64 {
        self.label_weighted(|k, l| self.recall(k, l))
    }

    fn purity_f(&self) -> f64 {
        self.label_weighted(|k, l| harmonic(self.precision(k, l), self.recall(k, l)))
    }
}

/// Σ_C (|C|/n) · max_L precision(C, L).
pub fn purity(clusters: &ClusterSet, labels: &ClusterSet) -> Result<f64> {
    Ok(Contingency::new(clusters, labels)?.purity())
}

/// Σ_L (|L|/n) · max_C recall(C, L).
pub fn inverse_purity(clusters: &ClusterSet, labels: &ClusterSet) -> Result<f64> {
    Ok(Contingency::new(clusters, labels)?.inverse_purity())
}

/// Σ_L (|L|/n) · max_C F(C, L).
pub fn purity_f(clusters: &ClusterSet, labels: &ClusterSet) -> Result<f64> {
    Ok(Contingency::new(clusters, labels)?.purity_f())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairScore {
    /// 1-based cluster index in canonical order.
    pub cluster: usize,
    /// 1-based label-class index in canonical order.
    pub label: usize,
    pub precision: f64,
    pub recall: f64,
    pub f: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub purity: f64,
    pub inverse_purity: f64,
    pub purity_f: f64,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub per_pair: Option<Vec<PairScore>>,
}

impl EvalReport {
    pub const CSV_HEADER: &'static str = "purity,inverse_purity,purity_f,n";

    /// Header plus one data row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        let _ = write!(
            out,
            "\n{},{},{},{}\n",
            self.purity, self.inverse_purity, self.purity_f, self.n
        );
        out
    }
}

/// All summary metrics in one pass; `per_pair` lists every overlapping
/// (cluster, label) pair when requested.
pub fn evaluate(clusters: &ClusterSet, labels: &ClusterSet, per_pair: bool) -> Result<EvalReport> {
    let t = Contingency::new(clusters, labels)?;
    let pairs = per_pair.then(|| {
        let mut out = Vec::new();
        for k in 0..t.cluster_sizes.len() {
            for l in 0..t.label_sizes.len() {
                if t.overlap[k][l] == 0 {
                    continue;
                }
                let (p, r) = (t.precision(k, l), t.recall(k, l));
                out.push(PairScore {
                    cluster: k + 1,
                    label: l + 1,
                    precision: p,
                    recall: r,
                    f: harmonic(p, r),
                });
            }
        }
        out
    });
    Ok(EvalReport {
        purity: t.purity(),
        inverse_purity: t.inverse_purity(),
        purity_f: t.purity_f(),
        n: t.n,
        per_pair: pairs,
    })
}
