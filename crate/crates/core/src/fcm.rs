//! Improved fuzzy c-means.
//!
//! Differences from textbook FCM:
//!
//! * The number of clusters is not an input. [`entropy_init`] picks low-entropy
//!   data points as centers and removes each center's neighbourhood until
//!   every point is covered.
//! * Distances are feature-weighted (see [`weighted_distance`]).
//! * Centers are recomputed as the plain mean of the points whose largest
//!   membership is in that cluster and is at least `alpha`. A cluster with no
//!   such point keeps its previous center.
//!
//! Memberships use the standard update with fuzzifier `m`. Because the center
//! step is not the analytic minimizer, the objective trace is diagnostic and
//! need not decrease.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cluster::ClusterSet;
use crate::error::{domain, Result};
use crate::features::{FeatureMatrix, FeatureVector, FeatureWeights};
use crate::tolerance::{merge_tolerance_classes, upper_approximation, SimilarityMatrix};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FcmConfig {
    /// Membership threshold for the center update, in [0, 1].
    pub alpha: f64,
    /// Fuzzifier, > 1.
    pub m: f64,
    pub max_iter: usize,
    /// Convergence tolerance on the largest center displacement.
    pub epsilon: f64,
    /// Recorded in reports only. Ties are broken deterministically, so no
    /// random draws are made.
    pub seed: u64,
    /// Neighbourhood similarity threshold for [`entropy_init`], in (0, 1).
    pub init_beta: f64,
    /// Feature weights; uniform when `None`.
    pub weights: Option<FeatureWeights>,
}

impl Default for FcmConfig {
    fn default() -> Self {
        Self {
            alpha: 0.5,
            m: 2.0,
            max_iter: 300,
            epsilon: 1e-6,
            seed: 42,
            init_beta: 0.5,
            weights: None,
        }
    }
}

impl FcmConfig {
    pub fn validate(&self) -> Result<()> {
        check_alpha(self.alpha)?;
        if !(self.m > 1.0 && self.m.is_finite()) {
            return domain(format!("fuzzifier m = {} must be > 1", self.m));
        }
        if self.epsilon.is_nan() || self.epsilon <= 0.0 {
            return domain(format!("epsilon = {} must be > 0", self.epsilon));
        }
        check_beta(self.init_beta)?;
        if let Some(w) = &self.weights {
            check_weights(w)?;
        }
        Ok(())
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if (0.0..=1.0).contains(&alpha) {
        Ok(())
    } else {
        domain(format!("alpha = {alpha} must lie in [0, 1]"))
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && beta < 1.0 {
        Ok(())
    } else {
        domain(format!("init beta = {beta} must lie in (0, 1)"))
    }
}

fn check_weights(w: &FeatureWeights) -> Result<()> {
    match w.weights.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
        Some(x) => domain(format!("feature weight {x} must be finite and non-negative")),
        None => Ok(()),
    }
}

/// Cluster centers in data space.
#[derive(Clone, Debug, PartialEq)]
pub struct Centers {
    vectors: Vec<FeatureVector>,
}

impl Centers {
    pub fn new(vectors: Vec<FeatureVector>) -> Result<Self> {
        let Some(first) = vectors.first() else {
            return domain("at least one center is required");
        };
        let dim = first.dim();
        if vectors.iter().any(|v| v.dim() != dim) {
            return domain("centers have mixed dimensions");
        }
        Ok(Self { vectors })
    }

    pub fn c(&self) -> usize {
        self.vectors.len()
    }

    pub fn dim(&self) -> usize {
        self.vectors[0].dim()
    }

    pub fn get(&self, k: usize) -> &[f64] {
        self.vectors[k].as_slice()
    }

    pub fn vectors(&self) -> &[FeatureVector] {
        &self.vectors
    }
}

/// `n x c` fuzzy partition; entry `(i, j)` is the membership of point `i` in cluster `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct MembershipMatrix {
    n: usize,
    c: usize,
    values: Vec<f64>,
}

impl MembershipMatrix {
    /// Checks entries lie in [0, 1] and rows sum to 1 within 1e-9.
    pub fn new(n: usize, c: usize, values: Vec<f64>) -> Result<Self> {
        if c == 0 || n.checked_mul(c) != Some(values.len()) {
            return domain(format!("{} values do not form a {n}x{c} matrix", values.len()));
        }
        let m = Self { n, c, values };
        for i in 0..n {
            let row = m.row(i);
            if row.iter().any(|v| !(0.0..=1.0).contains(v)) {
                return domain(format!("row {i} has an entry outside [0, 1]"));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > 1e-9 {
                return domain(format!("row {i} sums to {sum}"));
            }
        }
        Ok(m)
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != c) {
            return domain("membership rows have mixed lengths");
        }
        Self::new(rows.len(), c, rows.concat())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn c(&self) -> usize {
        self.c
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.c..(i + 1) * self.c]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.c + j]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FcmResult {
    pub centers: Centers,
    pub memberships: MembershipMatrix,
    pub iterations: usize,
    pub converged: bool,
    /// Sum of `mu^m * d^2` per iteration, evaluated with the memberships of
    /// that iteration and the centers they were computed from.
    pub objective_trace: Vec<f64>,
}

impl FcmResult {
    pub fn to_json(&self, include_memberships: bool) -> serde_json::Value {
        let centers: Vec<&[f64]> = self.centers.vectors.iter().map(|v| v.as_slice()).collect();
        let mut obj = serde_json::Map::new();
        obj.insert("centers".into(), serde_json::json!(centers));
        obj.insert("converged".into(), serde_json::json!(self.converged));
        obj.insert("iterations".into(), serde_json::json!(self.iterations));
        if include_memberships {
            obj.insert("memberships".into(), serde_json::json!(self.memberships.to_rows()));
        }
        obj.insert("objective_trace".into(), serde_json::json!(self.objective_trace));
        serde_json::Value::Object(obj)
    }
}

fn squared_distance(x: &[f64], c: &[f64], w: &[f64]) -> f64 {
    x.iter()
        .zip(c)
        .zip(w)
        .map(|((a, b), wi)| wi * (a - b) * (a - b))
        .sum()
}

/// `sqrt(sum_i w_i * (x_i - c_i)^2)`.
pub fn weighted_distance(x: &[f64], c: &[f64], w: &FeatureWeights) -> Result<f64> {
    if x.len() != c.len() || x.len() != w.len() {
        return domain(format!(
            "dimension mismatch: point {}, center {}, weights {}",
            x.len(),
            c.len(),
            w.len()
        ));
    }
    Ok(squared_distance(x, c, &w.weights).sqrt())
}

fn resolve_weights(config_weights: Option<&FeatureWeights>, dim: usize) -> Result<FeatureWeights> {
    match config_weights {
        None => Ok(FeatureWeights::uniform(dim)),
        Some(w) if w.len() == dim => {
            check_weights(w)?;
            Ok(w.clone())
        }
        Some(w) => domain(format!("{} weights for {dim}-dimensional points", w.len())),
    }
}

/// Relative gap below which two entropy scores count as tied.
const TIE_TOLERANCE: f64 = 1e-12;

fn lex_less(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).find(|(x, y)| x != y).is_some_and(|(x, y)| x < y)
}

/// Binary entropy of a similarity value, in bits.
fn similarity_entropy(s: f64) -> f64 {
    let term = |p: f64| if p > 0.0 { p * p.log2() } else { 0.0 };
    -(term(s) + term(1.0 - s))
}

/// Selects initial centers and, with them, the number of clusters.
///
/// Similarity between points is `1 - d / d_max`, with `d` the weighted
/// distance and `d_max` the largest pairwise distance in the whole data set.
/// Each round, every remaining point is scored by the summed binary entropy of
/// its similarities to the other remaining points; the lowest-scoring point
/// becomes a center, and it is removed together with
/// every remaining point whose similarity to it is at least `beta`. Rounds
/// continue until no point remains. Centers are returned in selection order
/// and are always actual data points.
///
/// Scores within a relative 1e-12 of each other are ties, resolved in favour
/// of the lexicographically smallest point, so the result does not depend on
/// the order of the input rows.
pub fn entropy_init(points: &FeatureMatrix, beta: f64, weights: &FeatureWeights) -> Result<Centers> {
    if points.rows() == 0 {
        return domain("cannot initialize centers from zero points");
    }
    check_beta(beta)?;
    let w = resolve_weights(Some(weights), points.cols())?;
    let w = &w.weights;

    // Identical points share scores and are removed together, so work on
    // distinct rows with multiplicities. First occurrence keeps index order.
    let mut seen: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut uniques: Vec<usize> = Vec::new();
    let mut mult: Vec<f64> = Vec::new();
    for (i, row) in points.iter_rows().enumerate() {
        let key: Vec<u64> = row.iter().map(|v| v.to_bits()).collect();
        match seen.get(&key) {
            Some(&u) => mult[u] += 1.0,
            None => {
                seen.insert(key, uniques.len());
                uniques.push(i);
                mult.push(1.0);
            }
        }
    }
    let u = uniques.len();
    let dist = |a: usize, b: usize| {
        squared_distance(points.row(uniques[a]), points.row(uniques[b]), w).sqrt()
    };

    let d_max = (0..u)
        .into_par_iter()
        .map(|a| (a + 1..u).map(|b| dist(a, b)).fold(0.0, f64::max))
        .reduce(|| 0.0, f64::max);
    if d_max == 0.0 {
        return Centers::new(vec![FeatureVector(points.row(0).to_vec())]);
    }
    let similarity = |a: usize, b: usize| (1.0 - dist(a, b) / d_max).clamp(0.0, 1.0);

    let mut remaining: Vec<usize> = (0..u).collect();
    let mut centers = Vec::new();
    while !remaining.is_empty() {
        let scores: Vec<f64> = remaining
            .par_iter()
            .map(|&a| {
                remaining
                    .iter()
                    .filter(|&&b| b != a)
                    .map(|&b| mult[b] * similarity_entropy(similarity(a, b)))
                    .sum()
            })
            .collect();
        let mut best_pos = 0;
        for pos in 1..remaining.len() {
            let (s, b) = (scores[pos], scores[best_pos]);
            let tie = (s - b).abs() <= TIE_TOLERANCE * s.abs().max(b.abs()).max(1.0);
            let row = |p: usize| points.row(uniques[remaining[p]]);
            if (!tie && s < b) || (tie && lex_less(row(pos), row(best_pos))) {
                best_pos = pos;
            }
        }
        let best = remaining[best_pos];
        centers.push(FeatureVector(points.row(uniques[best]).to_vec()));
        remaining.retain(|&b| b != best && similarity(best, b) < beta);
    }
    Centers::new(centers)
}

/// Standard fuzzy membership update.
///
/// A point that coincides with one or more centers splits its membership
/// evenly over those centers.
pub fn update_memberships(
    points: &FeatureMatrix,
    centers: &Centers,
    m: f64,
    weights: &FeatureWeights,
) -> Result<MembershipMatrix> {
    if !(m > 1.0 && m.is_finite()) {
        return domain(format!("fuzzifier m = {m} must be > 1"));
    }
    if centers.dim() != points.cols() {
        return domain(format!(
            "centers have dimension {}, points {}",
            centers.dim(),
            points.cols()
        ));
    }
    let w = resolve_weights(Some(weights), points.cols())?;
    let exponent = 2.0 / (m - 1.0);
    let c = centers.c();
    let rows: Vec<Vec<f64>> = (0..points.rows())
        .into_par_iter()
        .map(|i| {
            let x = points.row(i);
            let d: Vec<f64> = (0..c)
                .map(|k| squared_distance(x, centers.get(k), &w.weights).sqrt())
                .collect();
            membership_row(&d, exponent)
        })
        .collect();
    Ok(MembershipMatrix {
        n: points.rows(),
        c,
        values: rows.concat(),
    })
}

fn membership_row(d: &[f64], exponent: f64) -> Vec<f64> {
    let zeros = d.iter().filter(|&&v| v == 0.0).count();
    if zeros > 0 {
        let share = 1.0 / zeros as f64;
        return d.iter().map(|&v| if v == 0.0 { share } else { 0.0 }).collect();
    }
    // (d_min / d_k)^(2/(m-1)) stays in (0, 1] and avoids overflow
    let d_min = d.iter().copied().fold(f64::INFINITY, f64::min);
    let u: Vec<f64> = d.iter().map(|&v| (d_min / v).powf(exponent)).collect();
    let total: f64 = u.iter().sum();
    u.iter().map(|v| v / total).collect()
}

/// Index of the largest entry; the lowest index wins ties.
fn argmax(row: &[f64]) -> usize {
    let mut best = 0;
    for (k, &v) in row.iter().enumerate().skip(1) {
        if v > row[best] {
            best = k;
        }
    }
    best
}

/// Recomputes each center as the plain mean of the points whose maximal
/// membership falls in that cluster with value at least `alpha`.
pub fn update_centers_thresholded(
    points: &FeatureMatrix,
    memberships: &MembershipMatrix,
    previous: &Centers,
    alpha: f64,
) -> Result<Centers> {
    check_alpha(alpha)?;
    if memberships.n() != points.rows() || memberships.c() != previous.c() {
        return domain(format!(
            "membership matrix is {}x{}, expected {}x{}",
            memberships.n(),
            memberships.c(),
            points.rows(),
            previous.c()
        ));
    }
    if previous.dim() != points.cols() {
        return domain("previous centers and points differ in dimension");
    }
    let dim = points.cols();
    let c = previous.c();
    let mut sums = vec![vec![0.0; dim]; c];
    let mut counts = vec![0usize; c];
    for i in 0..points.rows() {
        let row = memberships.row(i);
        let k = argmax(row);
        if row[k] >= alpha {
            for (s, x) in sums[k].iter_mut().zip(points.row(i)) {
                *s += x;
            }
            counts[k] += 1;
        }
    }
    let vectors = sums
        .into_iter()
        .zip(counts)
        .enumerate()
        .map(|(k, (sum, count))| {
            if count == 0 {
                previous.vectors[k].clone()
            } else {
                FeatureVector(sum.into_iter().map(|s| s / count as f64).collect())
            }
        })
        .collect();
    Ok(Centers { vectors })
}

fn objective(points: &FeatureMatrix, centers: &Centers, u: &MembershipMatrix, m: f64, w: &[f64]) -> f64 {
    (0..points.rows())
        .map(|i| {
            let x = points.row(i);
            (0..centers.c())
                .map(|k| u.get(i, k).powf(m) * squared_distance(x, centers.get(k), w))
                .sum::<f64>()
        })
        .sum()
}

/// Runs entropy initialization followed by alternating membership and
/// thresholded center updates until the largest center displacement drops
/// below `epsilon` or `max_iter` iterations have run. The returned
/// memberships are evaluated against the final centers.
pub fn run_fcm(points: &FeatureMatrix, config: &FcmConfig) -> Result<FcmResult> {
    config.validate()?;
    let weights = resolve_weights(config.weights.as_ref(), points.cols())?;
    let mut centers = entropy_init(points, config.init_beta, &weights)?;
    let mut trace = Vec::new();
    let mut converged = false;
    let mut iterations = 0;

    while iterations < config.max_iter {
        iterations += 1;
        let u = update_memberships(points, &centers, config.m, &weights)?;
        trace.push(objective(points, &centers, &u, config.m, &weights.weights));
        let next = update_centers_thresholded(points, &u, &centers, config.alpha)?;
        let shift = (0..centers.c())
            .map(|k| squared_distance(centers.get(k), next.get(k), &weights.weights).sqrt())
            .fold(0.0, f64::max);
        centers = next;
        if shift < config.epsilon {
            converged = true;
            break;
        }
    }

    let memberships = update_memberships(points, &centers, config.m, &weights)?;
    Ok(FcmResult {
        centers,
        memberships,
        iterations,
        converged,
        objective_trace: trace,
    })
}

/// 0-based argmax cluster per point, ties to the lowest index.
pub fn hard_assignment(memberships: &MembershipMatrix) -> Vec<usize> {
    (0..memberships.n()).map(|i| argmax(memberships.row(i))).collect()
}

/// Argmax partition of items `1..=n`; clusters nobody is assigned to are dropped.
pub fn harden(memberships: &MembershipMatrix) -> ClusterSet {
    let items: Vec<usize> = (1..=memberships.n()).collect();
    ClusterSet::from_assignment(&items, &hard_assignment(memberships))
        .expect("argmax assignment is a partition")
}

/// Optional post-pass that merges hard clusters whose centroids are similar.
///
/// Centroid similarity is `1 - d / d_max` over the cluster centroids, and
/// clusters are merged through the tolerance relation at threshold `p`.
/// Cluster members are 1-based row indices into `points`.
pub fn merge_similar_clusters(
    points: &FeatureMatrix,
    clusters: &ClusterSet,
    weights: &FeatureWeights,
    p: f64,
) -> Result<ClusterSet> {
    let w = resolve_weights(Some(weights), points.cols())?;
    let centroids: Vec<Vec<f64>> = clusters
        .clusters()
        .iter()
        .map(|members| {
            let mut sum = vec![0.0; points.cols()];
            for &id in members {
                for (s, x) in sum.iter_mut().zip(points.row(id - 1)) {
                    *s += x;
                }
            }
            sum.into_iter().map(|s| s / members.len() as f64).collect()
        })
        .collect();
    let k = centroids.len();
    let dist = |a: usize, b: usize| squared_distance(&centroids[a], &centroids[b], &w.weights).sqrt();
    let d_max = (0..k)
        .flat_map(|a| (a + 1..k).map(move |b| (a, b)))
        .map(|(a, b)| dist(a, b))
        .fold(0.0, f64::max);
    let sim = SimilarityMatrix::from_fn(k, |a, b| {
        if d_max == 0.0 {
            1.0
        } else {
            (1.0 - dist(a, b) / d_max).clamp(0.0, 1.0)
        }
    })?;
    let rel = upper_approximation(&sim, p)?;
    let merged = merge_tolerance_classes(&rel);
    let groups = merged
        .clusters()
        .iter()
        .map(|ks| {
            ks.iter()
                .flat_map(|&kk| clusters.clusters()[kk - 1].iter().copied())
                .collect()
        })
        .collect();
    ClusterSet::new(groups)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[f64]]) -> FeatureMatrix {
        FeatureMatrix::from_rows(rows).unwrap()
    }

    fn centers(rows: &[&[f64]]) -> Centers {
        Centers::new(rows.iter().map(|r| FeatureVector(r.to_vec())).collect()).unwrap()
    }

    fn uniform(d: usize) -> FeatureWeights {
        FeatureWeights::uniform(d)
    }

    #[test]
    fn distance_examples() {
        assert_eq!(weighted_distance(&[1.0, 2.0], &[1.0, 2.0], &uniform(2)).unwrap(), 0.0);
        assert_eq!(weighted_distance(&[1.0, 0.0], &[0.0, 0.0], &uniform(2)).unwrap(), 1.0);
        let w = FeatureWeights {
            method: crate::features::WeightMethod::GainRatio,
            weights: vec![4.0, 0.0],
        };
        assert_eq!(weighted_distance(&[1.0, 1.0], &[0.0, 0.0], &w).unwrap(), 2.0);
        assert!(weighted_distance(&[1.0], &[0.0, 0.0], &uniform(2)).is_err());
    }

    #[test]
    fn membership_examples() {
        let c2 = centers(&[&[-1.0], &[1.0]]);
        let u = update_memberships(&mat(&[&[0.0]]), &c2, 2.0, &uniform(1)).unwrap();
        assert_eq!(u.row(0), &[0.5, 0.5]);

        let c3 = centers(&[&[0.0], &[1.0], &[2.0]]);
        let u = update_memberships(&mat(&[&[0.0]]), &c3, 2.0, &uniform(1)).unwrap();
        assert_eq!(u.row(0), &[1.0, 0.0, 0.0]);

        let u = update_memberships(&mat(&[&[0.0]]), &centers(&[&[1.0], &[-2.0]]), 2.0, &uniform(1))
            .unwrap();
        assert!((u.get(0, 0) - 0.8).abs() < 1e-12);
        assert!((u.get(0, 1) - 0.2).abs() < 1e-12);

        assert!(update_memberships(&mat(&[&[0.0]]), &c2, 1.0, &uniform(1)).is_err());
    }

    #[test]
    fn coincident_centers_split_mass() {
        let c = centers(&[&[0.0], &[0.0], &[3.0]]);
        let u = update_memberships(&mat(&[&[0.0]]), &c, 2.0, &uniform(1)).unwrap();
        assert_eq!(u.row(0), &[0.5, 0.5, 0.0]);
    }

    #[test]
    fn thresholded_update_examples() {
        let pts = mat(&[&[0.0], &[2.0], &[10.0], &[12.0]]);
        let prev = centers(&[&[5.0], &[5.0]]);
        let u = MembershipMatrix::from_rows(&[
            vec![0.9, 0.1],
            vec![0.6, 0.4],
            vec![0.3, 0.7],
            vec![0.2, 0.8],
        ])
        .unwrap();
        let next = update_centers_thresholded(&pts, &u, &prev, 0.0).unwrap();
        assert_eq!(next.get(0), &[1.0]);
        assert_eq!(next.get(1), &[11.0]);

        // nothing reaches 0.95: both centers retained
        let next = update_centers_thresholded(&pts, &u, &prev, 0.95).unwrap();
        assert_eq!(next, prev);
    }

    #[test]
    fn thresholded_update_uses_only_qualifying_points() {
        // all three points have their maximum in cluster 0: 0.9, 0.6, 0.4
        let pts = mat(&[&[1.0, 0.0], &[3.0, 2.0], &[100.0, 100.0]]);
        let u = MembershipMatrix::from_rows(&[
            vec![0.9, 0.05, 0.05],
            vec![0.6, 0.2, 0.2],
            vec![0.4, 0.3, 0.3],
        ])
        .unwrap();
        let prev = centers(&[&[0.0, 0.0], &[7.0, 7.0], &[8.0, 8.0]]);
        let next = update_centers_thresholded(&pts, &u, &prev, 0.5).unwrap();
        assert_eq!(next.get(0), &[2.0, 1.0]);
        assert_eq!(next.get(1), &[7.0, 7.0]);
        assert_eq!(next.get(2), &[8.0, 8.0]);
    }

    #[test]
    fn harden_examples() {
        let u = MembershipMatrix::from_rows(&[vec![0.2, 0.8]]).unwrap();
        assert_eq!(hard_assignment(&u), vec![1]);
        let u = MembershipMatrix::from_rows(&[vec![0.5, 0.5]]).unwrap();
        assert_eq!(hard_assignment(&u), vec![0]);
        let u = MembershipMatrix::from_rows(&[
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ])
        .unwrap();
        assert_eq!(harden(&u).clusters(), &[vec![1], vec![2], vec![3]]);
        // empty cluster 2 is dropped
        let u = MembershipMatrix::from_rows(&[vec![0.9, 0.1], vec![0.7, 0.3]]).unwrap();
        assert_eq!(harden(&u).clusters(), &[vec![1, 2]]);
    }

    #[test]
    fn entropy_init_duplicates_give_one_center() {
        let pts = mat(&[&[0.3, 0.7][..]; 5]);
        let c = entropy_init(&pts, 0.5, &uniform(2)).unwrap();
        assert_eq!(c.c(), 1);
        assert_eq!(c.get(0), &[0.3, 0.7]);
    }

    #[test]
    fn entropy_init_two_groups() {
        // all within-group similarities are 1 and all cross-group ones 0, so
        // every score is 0; the first point of each group is chosen in turn
        let pts = mat(&[&[0.0], &[0.0], &[0.0], &[10.0], &[10.0], &[10.0]]);
        let c = entropy_init(&pts, 0.5, &uniform(1)).unwrap();
        assert_eq!(c.c(), 2);
        assert_eq!(c.get(0), &[0.0]);
        assert_eq!(c.get(1), &[10.0]);
    }

    #[test]
    fn entropy_init_prefers_low_entropy_point() {
        // Points 0, 1, 2, 3, 20 with d_max = 20. Entropy scores:
        // p1: H(.95)+H(.95)+H(.9)+H(.05) = 1.328
        // p0: H(.95)+H(.9)+H(.85)+H(0) = 1.365, p20 likewise 1.365
        // p2: 1.511, p3: 1.975
        // so the interior point 1 is chosen first; 0, 2 and 3 are within
        // similarity .5 of it and leave with it, then 20 is chosen.
        let pts = mat(&[&[0.0], &[1.0], &[2.0], &[3.0], &[20.0]]);
        let c = entropy_init(&pts, 0.5, &uniform(1)).unwrap();
        assert_eq!(c.c(), 2);
        assert_eq!(c.get(0), &[1.0]);
        assert_eq!(c.get(1), &[20.0]);
    }

    #[test]
    fn entropy_init_errors() {
        let empty = FeatureMatrix::new(0, 2, vec![]).unwrap();
        assert!(entropy_init(&empty, 0.5, &uniform(2)).is_err());
        let pts = mat(&[&[0.0]]);
        assert!(entropy_init(&pts, 0.0, &uniform(1)).is_err());
        assert!(entropy_init(&pts, 1.0, &uniform(1)).is_err());
        assert!(entropy_init(&pts, 0.5, &uniform(3)).is_err());
    }

    #[test]
    fn run_on_identical_points() {
        let pts = mat(&[&[1.0, 2.0][..]; 6]);
        let r = run_fcm(&pts, &FcmConfig::default()).unwrap();
        assert!(r.converged);
        assert!(r.iterations <= 2);
        assert_eq!(r.centers.c(), 1);
        assert_eq!(r.centers.get(0), &[1.0, 2.0]);
        assert!((0..6).all(|i| r.memberships.row(i) == [1.0]));
        assert_eq!(r.objective_trace.len(), r.iterations);
    }

    #[test]
    fn config_validation() {
        let bad = |f: fn(&mut FcmConfig)| {
            let mut c = FcmConfig::default();
            f(&mut c);
            c.validate().is_err()
        };
        assert!(bad(|c| c.alpha = 1.5));
        assert!(bad(|c| c.alpha = -0.1));
        assert!(bad(|c| c.m = 1.0));
        assert!(bad(|c| c.epsilon = 0.0));
        assert!(bad(|c| c.init_beta = 1.0));
        assert!(FcmConfig { alpha: 0.0, ..FcmConfig::default() }.validate().is_ok());
    }

    #[test]
    fn max_iter_zero_reports_not_converged() {
        let pts = mat(&[&[0.0], &[1.0], &[9.0]]);
        let cfg = FcmConfig {
            max_iter: 0,
            ..FcmConfig::default()
        };
        let r = run_fcm(&pts, &cfg).unwrap();
        assert_eq!(r.iterations, 0);
        assert!(!r.converged);
        assert!(r.objective_trace.is_empty());
    }

    #[test]
    fn merge_pass() {
        let pts = mat(&[&[0.0], &[0.1], &[5.0], &[5.1], &[100.0]]);
        let hard = ClusterSet::new(vec![vec![1], vec![2], vec![3, 4], vec![5]]).unwrap();
        let merged = merge_similar_clusters(&pts, &hard, &uniform(1), 0.9).unwrap();
        assert_eq!(merged.clusters(), &[vec![1, 2, 3, 4], vec![5]]);
    }

    #[test]
    fn result_json_keys() {
        let pts = mat(&[&[0.0], &[0.0]]);
        let r = run_fcm(&pts, &FcmConfig::default()).unwrap();
        let with = r.to_json(true);
        assert!(with.get("memberships").is_some());
        let without = r.to_json(false);
        assert!(without.get("memberships").is_none());
        assert_eq!(without["centers"], serde_json::json!([[0.0]]));
    }
}
