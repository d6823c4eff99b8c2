//! Session feature representations and entropy-based feature weighting.
//!
//! All logarithms are base 2 and `0 * log2(0)` is taken as 0. Probabilities
//! are maximum-likelihood relative frequencies without smoothing.

use std::collections::{BTreeSet, HashMap};
use std::hash::Hash;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::session::{CategoryCode, Session, SessionDataset};

/// Distinct category codes visited in one session.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PageSet(Vec<CategoryCode>);

impl PageSet {
    /// Builds a set from arbitrary codes; duplicates are dropped.
    pub fn new(codes: impl IntoIterator<Item = CategoryCode>) -> Self {
        let set: BTreeSet<_> = codes.into_iter().collect();
        Self(set.into_iter().collect())
    }

    /// Sorted, duplicate-free codes.
    pub fn codes(&self) -> &[CategoryCode] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Size of the intersection with `other`, by sorted merge.
    pub fn intersection_len(&self, other: &PageSet) -> usize {
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j, mut count) = (0, 0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    count += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        count
    }
}

pub fn distinct_pages(s: &Session) -> PageSet {
    PageSet::new(s.visits.iter().copied())
}

/// Dense per-category vector for one session.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FeatureVector(pub Vec<f64>);

impl FeatureVector {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

/// Visit counts per category, or visit shares when `normalized`.
pub fn frequency_vector(s: &Session, num_categories: usize, normalized: bool) -> FeatureVector {
    let mut values = vec![0.0; num_categories];
    for &code in &s.visits {
        if let Some(slot) = (code as usize).checked_sub(1).and_then(|i| values.get_mut(i)) {
            *slot += 1.0;
        }
    }
    if normalized && !s.visits.is_empty() {
        let len = s.visits.len() as f64;
        values.iter_mut().for_each(|v| *v /= len);
    }
    FeatureVector(values)
}

/// Row-major matrix of points, one row per item.
#[derive(Clone, Debug, PartialEq)]
pub struct FeatureMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl FeatureMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows.checked_mul(cols) != Some(data.len()) {
            return domain(format!(
                "matrix data length {} does not match {rows}x{cols}",
                data.len()
            ));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return domain(format!("row {i} has length {}, expected {cols}", r.len()));
            }
            data.extend_from_slice(r);
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// One frequency vector per session, in dataset order.
    pub fn from_sessions(data: &SessionDataset, normalized: bool) -> Self {
        let cols = data.num_categories();
        let mut out = Vec::with_capacity(data.len() * cols);
        for s in data.sessions() {
            out.extend(frequency_vector(s, cols, normalized).0);
        }
        Self {
            rows: data.len(),
            cols,
            data: out,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[f64]> + '_ {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.data[i * self.cols + j]).collect()
    }
}

/// Class label per item, plus the sorted set of distinct labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelAssignment {
    labels: Vec<usize>,
    classes: Vec<usize>,
}

impl LabelAssignment {
    pub fn new(labels: Vec<usize>) -> Result<Self> {
        if labels.is_empty() {
            return domain("label assignment is empty");
        }
        let classes: BTreeSet<usize> = labels.iter().copied().collect();
        Ok(Self {
            labels,
            classes: classes.into_iter().collect(),
        })
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn classes(&self) -> &[usize] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightMethod {
    InfoGain,
    GainRatio,
    Uniform,
}

impl std::str::FromStr for WeightMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "info_gain" | "info-gain" => Ok(Self::InfoGain),
            "gain_ratio" | "gain-ratio" => Ok(Self::GainRatio),
            "uniform" => Ok(Self::Uniform),
            other => domain(format!("unknown weight method {other:?}")),
        }
    }
}

/// Per-feature weights, serialized as `{"method": ..., "weights": [...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeatureWeights {
    pub method: WeightMethod,
    pub weights: Vec<f64>,
}

impl FeatureWeights {
    pub fn uniform(dim: usize) -> Self {
        Self {
            method: WeightMethod::Uniform,
            weights: vec![1.0; dim],
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

fn plogp(p: f64) -> f64 {
    if p > 0.0 {
        p * p.log2()
    } else {
        0.0
    }
}

/// Shannon entropy in bits of a probability vector.
pub fn entropy(dist: &[f64]) -> Result<f64> {
    if dist.is_empty() {
        return domain("entropy of an empty distribution");
    }
    if let Some(p) = dist.iter().find(|p| !(p.is_finite() && **p >= 0.0)) {
        return domain(format!("invalid probability {p}"));
    }
    let sum: f64 = dist.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return domain(format!("probabilities sum to {sum}, expected 1"));
    }
    // -0.0 for pure distributions is normalized to 0.0
    Ok(0.0 - dist.iter().map(|&p| plogp(p)).sum::<f64>())
}

/// Entropy of the empirical distribution of `values`.
fn empirical_entropy<T: Eq + Hash>(values: &[T]) -> f64 {
    let n = values.len() as f64;
    let mut counts: HashMap<&T, usize> = HashMap::new();
    for v in values {
        *counts.entry(v).or_default() += 1;
    }
    let mut counts: Vec<usize> = counts.into_values().collect();
    counts.sort_unstable();
    0.0 - counts.iter().map(|&c| plogp(c as f64 / n)).sum::<f64>()
}

/// H(K) - sum over feature values m of P(m) * H(K | m).
pub fn information_gain<T: Eq + Hash>(feature_values: &[T], labels: &LabelAssignment) -> Result<f64> {
    let labels = labels.labels();
    if feature_values.len() != labels.len() {
        return domain(format!(
            "feature has {} values but there are {} labels",
            feature_values.len(),
            labels.len()
        ));
    }
    let n = labels.len() as f64;
    let h_k = empirical_entropy(labels);

    let mut groups: HashMap<&T, Vec<usize>> = HashMap::new();
    for (v, &l) in feature_values.iter().zip(labels) {
        groups.entry(v).or_default().push(l);
    }
    let mut conditional: Vec<(usize, f64)> = groups
        .values()
        .map(|ls| (ls.len(), empirical_entropy(ls)))
        .collect();
    // fixed summation order, independent of hash iteration
    conditional.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let h_cond: f64 = conditional
        .iter()
        .map(|&(count, h)| count as f64 / n * h)
        .sum();
    Ok((h_k - h_cond).clamp(0.0, h_k))
}

/// Entropy of the feature's own value distribution.
pub fn split_info<T: Eq + Hash>(feature_values: &[T]) -> Result<f64> {
    if feature_values.is_empty() {
        return domain("split info of an empty feature");
    }
    Ok(empirical_entropy(feature_values))
}

/// Information gain divided by split info; 0 for a constant feature.
pub fn gain_ratio<T: Eq + Hash>(feature_values: &[T], labels: &LabelAssignment) -> Result<f64> {
    let ig = information_gain(feature_values, labels)?;
    let si = split_info(feature_values)?;
    if si <= 0.0 {
        return Ok(0.0);
    }
    Ok((ig / si).clamp(0.0, 1.0))
}

/// Number of equal-width bins used for an `n`-item column: ceil(log2 n) + 1.
pub fn default_bin_count(n: usize) -> usize {
    if n <= 1 {
        return 1;
    }
    (usize::BITS - (n - 1).leading_zeros()) as usize + 1
}

/// Equal-width binning of a continuous column into `bins` integer bins.
pub fn discretize_equal_width(column: &[f64], bins: usize) -> Vec<usize> {
    let bins = bins.max(1);
    let (lo, hi) = column
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    if hi.is_nan() || lo.is_nan() || hi <= lo {
        return vec![0; column.len()];
    }
    let width = hi - lo;
    column
        .iter()
        .map(|&x| {
            let b = ((x - lo) / width * bins as f64).floor() as usize;
            b.min(bins - 1)
        })
        .collect()
}

/// Weight per already-discretized column.
pub fn compute_feature_weights(
    columns: &[Vec<usize>],
    labels: &LabelAssignment,
    method: WeightMethod,
) -> Result<FeatureWeights> {
    if method == WeightMethod::Uniform {
        return Ok(FeatureWeights::uniform(columns.len()));
    }
    let weights = columns
        .par_iter()
        .map(|col| match method {
            WeightMethod::InfoGain => information_gain(col, labels),
            WeightMethod::GainRatio => gain_ratio(col, labels),
            WeightMethod::Uniform => Ok(1.0),
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(FeatureWeights { method, weights })
}

/// Discretizes every column of `points` with [`default_bin_count`] bins and
/// weights them against `labels`.
pub fn weights_for_points(
    points: &FeatureMatrix,
    labels: &LabelAssignment,
    method: WeightMethod,
) -> Result<FeatureWeights> {
    if method == WeightMethod::Uniform {
        return Ok(FeatureWeights::uniform(points.cols()));
    }
    let bins = default_bin_count(points.rows());
    let columns: Vec<Vec<usize>> = (0..points.cols())
        .map(|j| discretize_equal_width(&points.column(j), bins))
        .collect();
    compute_feature_weights(&columns, labels, method)
}
