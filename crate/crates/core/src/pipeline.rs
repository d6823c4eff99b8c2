//! End-to-end session clustering: vectorize, weight, cluster.

use serde::{Deserialize, Serialize};

use crate::cluster::ClusterSet;
use crate::error::{domain, Error, Result};
use crate::fcm::{harden, merge_similar_clusters, run_fcm, FcmConfig, FcmResult};
use crate::features::{weights_for_points, FeatureMatrix, FeatureWeights, LabelAssignment, WeightMethod};
use crate::session::SessionDataset;
use crate::tolerance::{check_threshold, streaming_tolerance_clusters, DEFAULT_THRESHOLD};

/// How sessions become numeric points.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Vectorization {
    /// Visit counts per category.
    Frequency,
    /// Visit shares per category (rows sum to 1).
    #[default]
    Normalized,
}

impl std::str::FromStr for Vectorization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "frequency" => Ok(Self::Frequency),
            "normalized" => Ok(Self::Normalized),
            other => domain(format!("unknown vectorization {other:?}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PipelineOptions {
    pub vectorization: Vectorization,
    pub weight_method: WeightMethod,
    /// Threshold of the tolerance pass that supplies labels for weighting.
    pub label_threshold: f64,
    /// When set, hardened clusters with similar centroids are merged at this threshold.
    pub merge_threshold: Option<f64>,
    pub fcm: FcmConfig,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        Self {
            vectorization: Vectorization::Normalized,
            weight_method: WeightMethod::Uniform,
            label_threshold: DEFAULT_THRESHOLD,
            merge_threshold: None,
            fcm: FcmConfig::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PipelineOutput {
    pub weights: FeatureWeights,
    pub result: FcmResult,
    pub clusters: ClusterSet,
}

/// Feature weights for `points`, with labels taken from tolerance clusters of
/// `data` at `label_threshold`.
pub fn session_weights(
    data: &SessionDataset,
    points: &FeatureMatrix,
    method: WeightMethod,
    label_threshold: f64,
) -> Result<FeatureWeights> {
    if method == WeightMethod::Uniform {
        return Ok(FeatureWeights::uniform(points.cols()));
    }
    check_threshold(label_threshold)?;
    let first_pass = streaming_tolerance_clusters(data, label_threshold)?;
    let assignment = first_pass.assignment();
    let labels = LabelAssignment::new((1..=data.len()).map(|id| assignment[&id]).collect())?;
    weights_for_points(points, &labels, method)
}

pub fn cluster_sessions(data: &SessionDataset, options: &PipelineOptions) -> Result<PipelineOutput> {
    let points = FeatureMatrix::from_sessions(data, options.vectorization == Vectorization::Normalized);
    let weights = match &options.fcm.weights {
        Some(w) => w.clone(),
        None => session_weights(data, &points, options.weight_method, options.label_threshold)?,
    };
    let config = FcmConfig {
        weights: Some(weights.clone()),
        ..options.fcm.clone()
    };
    let result = run_fcm(&points, &config)?;
    let mut clusters = harden(&result.memberships);
    if let Some(p) = options.merge_threshold {
        clusters = merge_similar_clusters(&points, &clusters, &weights, p)?;
    }
    Ok(PipelineOutput {
        weights,
        result,
        clusters,
    })
}
