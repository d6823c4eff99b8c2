//! Threshold (tolerance) clustering of sessions.
//!
//! Two sessions are tolerant of each other when the Jaccard similarity of
//! their distinct page sets is at least `p`. The upper approximation of a
//! session is the set of sessions tolerant of it; overlapping approximations
//! are merged until stable, which yields the connected components of the
//! threshold graph.
//!
//! Item ids in relations and cluster sets are 1-based, matching session ids.

use std::collections::HashMap;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::cluster::ClusterSet;
use crate::error::{domain, Result};
use crate::features::{distinct_pages, PageSet};
use crate::session::SessionDataset;

pub const DEFAULT_THRESHOLD: f64 = 0.5;

/// |a ∩ b| / |a ∪ b|.
pub fn jaccard_similarity(a: &PageSet, b: &PageSet) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return domain("jaccard similarity of an empty page set");
    }
    Ok(jaccard_unchecked(a, b))
}

fn jaccard_unchecked(a: &PageSet, b: &PageSet) -> f64 {
    let inter = a.intersection_len(b);
    inter as f64 / (a.len() + b.len() - inter) as f64
}

/// Symmetric similarity matrix with unit diagonal, stored as its strict upper
/// triangle in row-major order.
#[derive(Clone, Debug, PartialEq)]
pub struct SimilarityMatrix {
    n: usize,
    upper: Vec<f64>,
}

impl SimilarityMatrix {
    /// Evaluates `f(i, j)` for every `i < j`. Rows are computed in parallel
    /// into disjoint slots.
    pub fn from_fn<F>(n: usize, f: F) -> Result<Self>
    where
        F: Fn(usize, usize) -> f64 + Sync,
    {
        let rows: Vec<Vec<f64>> = (0..n)
            .into_par_iter()
            .map(|i| (i + 1..n).map(|j| f(i, j)).collect())
            .collect();
        Self::from_upper(n, rows.concat())
    }

    pub fn from_upper(n: usize, upper: Vec<f64>) -> Result<Self> {
        let expected = n * n.saturating_sub(1) / 2;
        if upper.len() != expected {
            return domain(format!(
                "upper triangle of a {n}x{n} matrix needs {expected} entries, got {}",
                upper.len()
            ));
        }
        if let Some(v) = upper.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return domain(format!("similarity {v} outside [0, 1]"));
        }
        Ok(Self { n, upper })
    }

    /// Builds from a full square matrix, checking symmetry and the unit diagonal.
    pub fn from_square(values: &[Vec<f64>]) -> Result<Self> {
        let n = values.len();
        let mut upper = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for (i, row) in values.iter().enumerate() {
            if row.len() != n {
                return domain(format!("row {i} has {} entries, expected {n}", row.len()));
            }
            if row[i] != 1.0 {
                return domain(format!("diagonal entry {i} is {}, expected 1", row[i]));
            }
            for j in i + 1..n {
                if row[j] != values[j][i] {
                    return domain(format!("matrix not symmetric at ({i}, {j})"));
                }
                upper.push(row[j]);
            }
        }
        Self::from_upper(n, upper)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Entry for 0-based indices.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        assert!(i < self.n && j < self.n, "index ({i}, {j}) out of bounds");
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => 1.0,
            std::cmp::Ordering::Less => self.upper[self.offset(i, j)],
            std::cmp::Ordering::Greater => self.upper[self.offset(j, i)],
        }
    }

    fn offset(&self, i: usize, j: usize) -> usize {
        i * self.n - i * (i + 1) / 2 + (j - i - 1)
    }

    /// Full matrix as CSV, rows and columns labelled by 1-based item id.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("item");
        for j in 0..self.n {
            let _ = write!(out, ",{}", j + 1);
        }
        out.push('\n');
        for i in 0..self.n {
            let _ = write!(out, "{}", i + 1);
            for j in 0..self.n {
                let _ = write!(out, ",{}", self.get(i, j));
            }
            out.push('\n');
        }
        out
    }
}

/// Jaccard similarity of distinct page sets for every pair of sessions.
pub fn similarity_matrix(data: &SessionDataset) -> SimilarityMatrix {
    let sets: Vec<PageSet> = data.sessions().iter().map(distinct_pages).collect();
    SimilarityMatrix::from_fn(sets.len(), |i, j| jaccard_unchecked(&sets[i], &sets[j]))
        .expect("jaccard values lie in [0, 1]")
}

/// Upper approximation `R(T_i)` of every item at threshold `p`.
#[derive(Clone, Debug, PartialEq)]
pub struct ToleranceRelation {
    threshold: f64,
    classes: Vec<Vec<usize>>,
}

impl ToleranceRelation {
    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Sorted 1-based ids tolerant of item `id` (1-based), including itself.
    pub fn class_of(&self, id: usize) -> &[usize] {
        &self.classes[id - 1]
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn to_json(&self) -> serde_json::Value {
        let items: Vec<serde_json::Value> = self
            .classes
            .iter()
            .enumerate()
            .map(|(i, c)| serde_json::json!({ "item": i + 1, "class": c }))
            .collect();
        serde_json::Value::Array(items)
    }
}

pub fn check_threshold(p: f64) -> Result<()> {
    if p > 0.0 && p <= 1.0 {
        Ok(())
    } else {
        domain(format!("threshold p = {p} must lie in (0, 1]"))
    }
}

/// `R(T_i) = { j : sim(i, j) >= p }`, inclusive.
pub fn upper_approximation(sim: &SimilarityMatrix, p: f64) -> Result<ToleranceRelation> {
    check_threshold(p)?;
    let n = sim.len();
    let classes = (0..n)
        .into_par_iter()
        .map(|i| (0..n).filter(|&j| sim.get(i, j) >= p).map(|j| j + 1).collect())
        .collect();
    Ok(ToleranceRelation {
        threshold: p,
        classes,
    })
}

/// Merges overlapping tolerance classes until no two clusters overlap.
pub fn merge_tolerance_classes(rel: &ToleranceRelation) -> ClusterSet {
    let n = rel.len();
    let mut uf = UnionFind::new(n);
    for (i, class) in rel.classes.iter().enumerate() {
        for &id in class {
            uf.union(i, id - 1);
        }
    }
    uf.into_clusters(|i| i + 1)
}

/// Tolerance clusters computed directly from the threshold graph, without
/// materializing the similarity matrix or the relation.
///
/// Sessions with identical page sets are collapsed before the pairwise pass,
/// so the cost is quadratic in the number of distinct page sets only.
pub fn streaming_tolerance_clusters(data: &SessionDataset, p: f64) -> Result<ClusterSet> {
    check_threshold(p)?;
    let mut index: HashMap<PageSet, usize> = HashMap::new();
    let mut uniques: Vec<PageSet> = Vec::new();
    let mut owner = Vec::with_capacity(data.len());
    for s in data.sessions() {
        let set = distinct_pages(s);
        let next = uniques.len();
        let u = *index.entry(set.clone()).or_insert_with(|| {
            uniques.push(set);
            next
        });
        owner.push(u);
    }

    let u = uniques.len();
    let edges: Vec<Vec<usize>> = (0..u)
        .into_par_iter()
        .map(|i| {
            (i + 1..u)
                .filter(|&j| jaccard_unchecked(&uniques[i], &uniques[j]) >= p)
                .collect()
        })
        .collect();
    let mut uf = UnionFind::new(u);
    for (i, js) in edges.iter().enumerate() {
        for &j in js {
            uf.union(i, j);
        }
    }
    let roots: Vec<usize> = owner.iter().map(|&o| uf.find(o)).collect();
    let items: Vec<usize> = (1..=data.len()).collect();
    ClusterSet::from_assignment(&items, &roots)
}

/// Tolerance clusters at threshold `p` via the full matrix and relation.
pub fn tolerance_clusters(data: &SessionDataset, p: f64) -> Result<(ToleranceRelation, ClusterSet)> {
    let sim = similarity_matrix(data);
    let rel = upper_approximation(&sim, p)?;
    let clusters = merge_tolerance_classes(&rel);
    Ok((rel, clusters))
}

/// Disjoint-set forest with path compression and union by rank.
#[derive(Clone, Debug)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        if self.rank[a] < self.rank[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        if self.rank[a] == self.rank[b] {
            self.rank[a] += 1;
        }
    }

    /// Groups elements by root, mapping element `i` to item id `id(i)`.
    pub(crate) fn into_clusters(mut self, id: impl Fn(usize) -> usize) -> ClusterSet {
        let n = self.parent.len();
        let roots: Vec<usize> = (0..n).map(|i| self.find(i)).collect();
        let items: Vec<usize> = (0..n).map(id).collect();
        ClusterSet::from_assignment(&items, &roots).expect("union-find yields a partition")
    }
}
