//! Hard partitions of item ids, used both for clustering output and for
//! reference label classes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Disjoint, non-empty clusters of item ids.
///
/// Stored canonically: members ascending, clusters ordered by smallest member.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClusterSet {
    clusters: Vec<Vec<usize>>,
}

impl ClusterSet {
    pub fn new(clusters: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::with_capacity(clusters.len());
        for (k, mut c) in clusters.into_iter().enumerate() {
            if c.is_empty() {
                return Err(Error::InvalidClusters(format!("cluster {} is empty", k + 1)));
            }
            c.sort_unstable();
            for &id in &c {
                if !seen.insert(id) {
                    return Err(Error::InvalidClusters(format!(
                        "item {id} appears more than once"
                    )));
                }
            }
            out.push(c);
        }
        out.sort_unstable_by_key(|c| c[0]);
        Ok(Self { clusters: out })
    }

    /// Groups `items[i]` by `assignment[i]`.
    pub fn from_assignment(items: &[usize], assignment: &[usize]) -> Result<Self> {
        if items.len() != assignment.len() {
            return Err(Error::Domain(format!(
                "{} items but {} assignments",
                items.len(),
                assignment.len()
            )));
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (&item, &a) in items.iter().zip(assignment) {
            groups.entry(a).or_default().push(item);
        }
        Self::new(groups.into_values().collect())
    }

    pub fn clusters(&self) -> &[Vec<usize>] {
        &self.clusters
    }

    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    pub fn num_items(&self) -> usize {
        self.clusters.iter().map(Vec::len).sum()
    }

    pub fn items(&self) -> BTreeSet<usize> {
        self.clusters.iter().flatten().copied().collect()
    }

    /// 1-based cluster index per item, keyed by item id.
    pub fn assignment(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for (k, c) in self.clusters.iter().enumerate() {
            for &id in c {
                out.insert(id, k + 1);
            }
        }
        out
    }

    /// Errors unless both partitions cover exactly the same ids.
    pub fn check_same_universe(&self, other: &ClusterSet) -> Result<()> {
        let a = self.items();
        let b = other.items();
        if a == b {
            return Ok(());
        }
        let only_a: Vec<_> = a.difference(&b).take(20).collect();
        let only_b: Vec<_> = b.difference(&a).take(20).collect();
        Err(Error::UniverseMismatch(format!(
            "ids only in first: {only_a:?}; ids only in second: {only_b:?}"
        )))
    }

    /// JSON document `{"threshold": p, "clusters": [[ids...], ...]}`.
    pub fn to_json(&self, threshold: Option<f64>) -> serde_json::Value {
        let mut obj = serde_json::Map::new();
        if let Some(p) = threshold {
            obj.insert("threshold".into(), serde_json::json!(p));
        }
        obj.insert("clusters".into(), serde_json::json!(self.clusters));
        serde_json::Value::Object(obj)
    }

    /// Reads the `clusters` field of a JSON document; other fields are ignored.
    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Doc {
            clusters: Vec<Vec<usize>>,
        }
        let doc: Doc = serde_json::from_str(text)
            .map_err(|e| Error::Parse {
                line: e.line(),
                message: e.to_string(),
            })?;
        Self::new(doc.clusters)
    }

    /// CSV with header `item_id,cluster_id`; cluster ids are 1-based.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("item_id,cluster_id\n");
        for (id, k) in self.assignment() {
            let _ = writeln!(out, "{id},{k}");
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut items = Vec::new();
        let mut assignment = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || (idx == 0 && line.starts_with("item_id")) {
                continue;
            }
            let mut fields = line.split(',').map(str::trim);
            let parse = |f: Option<&str>| -> Result<usize> {
                f.and_then(|f| f.parse().ok()).ok_or_else(|| Error::Parse {
                    line: idx + 1,
                    message: format!("expected `item_id,cluster_id`, got {line:?}"),
                })
            };
            let item = parse(fields.next())?;
            let cluster = parse(fields.next())?;
            if fields.next().is_some() {
                return Err(Error::Parse {
                    line: idx + 1,
                    message: "too many fields".into(),
                });
            }
            items.push(item);
            assignment.push(cluster);
        }
        Self::from_assignment(&items, &assignment)
    }
}
