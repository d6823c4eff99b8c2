//! Python bindings: `import pyclickclust`.
//!
//! Partitions cross the boundary as lists of lists of 1-based item ids,
//! matrices as lists of rows.

use std::str::FromStr;

use clickclust::eval;
use clickclust::features::{self, FeatureMatrix, FeatureWeights, LabelAssignment, PageSet, WeightMethod};
use clickclust::fcm::{self, FcmConfig, MembershipMatrix};
use clickclust::pipeline::{cluster_sessions, PipelineOptions, Vectorization};
use clickclust::session::{self, CategoryDictionary, DictionaryMode};
use clickclust::tolerance;
use clickclust::ClusterSet;
use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn err(e: clickclust::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn partition(clusters: Vec<Vec<usize>>) -> PyResult<ClusterSet> {
    ClusterSet::new(clusters).map_err(err)
}

fn matrix(rows: Vec<Vec<f64>>) -> PyResult<FeatureMatrix> {
    FeatureMatrix::from_rows(&rows).map_err(err)
}

fn label_assignment(values: Vec<i64>) -> PyResult<LabelAssignment> {
    // labels only need to be distinct, so remap to dense indices
    let mut distinct = values.clone();
    distinct.sort_unstable();
    distinct.dedup();
    let dense = values.iter().map(|v| distinct.binary_search(v).unwrap()).collect();
    LabelAssignment::new(dense).map_err(err)
}

fn weights(method: Option<&str>, explicit: Option<Vec<f64>>) -> PyResult<Option<FeatureWeights>> {
    Ok(match explicit {
        Some(w) => Some(FeatureWeights {
            method: match method {
                Some(m) => WeightMethod::from_str(m).map_err(err)?,
                None => WeightMethod::Uniform,
            },
            weights: w,
        }),
        None => None,
    })
}

/// A parsed session log.
#[pyclass(name = "SessionDataset", frozen)]
struct PySessionDataset {
    inner: session::SessionDataset,
}

#[pymethods]
impl PySessionDataset {
    /// Parses log text. With `dictionary`, the given category names are used
    /// and any name line in the text is ignored.
    #[staticmethod]
    #[pyo3(signature = (text, dictionary=None))]
    fn parse(text: &str, dictionary: Option<Vec<String>>) -> PyResult<Self> {
        let mode = match dictionary {
            Some(names) => DictionaryMode::External(CategoryDictionary::new(names).map_err(err)?),
            None => DictionaryMode::Embedded,
        };
        let inner = session::parse_log(text.as_bytes(), &mode).map_err(err)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    #[pyo3(signature = (path, dictionary=None))]
    fn read(path: &str, dictionary: Option<Vec<String>>) -> PyResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| PyOSError::new_err(format!("{path}: {e}")))?;
        Self::parse(&text, dictionary)
    }

    /// The bundled thirteen-session example.
    #[staticmethod]
    fn table1() -> PyResult<Self> {
        Self::parse(session::TABLE1_SEQ, None)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "SessionDataset(sessions={}, categories={})",
            self.inner.len(),
            self.inner.num_categories()
        )
    }

    fn categories(&self) -> Vec<String> {
        self.inner.dictionary().names().to_vec()
    }

    fn sessions(&self) -> Vec<Vec<u16>> {
        self.inner.sessions().iter().map(|s| s.visits.clone()).collect()
    }

    fn stats<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let st = session::dataset_stats(&self.inner);
        let d = PyDict::new(py);
        d.set_item("num_sessions", st.num_sessions)?;
        d.set_item("total_visits", st.total_visits)?;
        d.set_item("avg_visits", st.avg_visits)?;
        d.set_item("num_categories", st.num_categories)?;
        d.set_item("length_min", st.length_min)?;
        d.set_item("length_max", st.length_max)?;
        Ok(d)
    }

    /// Full square Jaccard similarity matrix of the sessions' page sets.
    fn similarity_matrix(&self) -> Vec<Vec<f64>> {
        let sim = tolerance::similarity_matrix(&self.inner);
        let n = sim.len();
        (0..n).map(|i| (0..n).map(|j| sim.get(i, j)).collect()).collect()
    }

    /// R(T_i) for every session, in session order.
    #[pyo3(signature = (p=tolerance::DEFAULT_THRESHOLD))]
    fn upper_approximation(&self, p: f64) -> PyResult<Vec<Vec<usize>>> {
        let sim = tolerance::similarity_matrix(&self.inner);
        let rel = tolerance::upper_approximation(&sim, p).map_err(err)?;
        Ok(rel.classes().to_vec())
    }

    #[pyo3(signature = (p=tolerance::DEFAULT_THRESHOLD, streaming=false))]
    fn tolerance_clusters(&self, p: f64, streaming: bool) -> PyResult<Vec<Vec<usize>>> {
        let clusters = if streaming {
            tolerance::streaming_tolerance_clusters(&self.inner, p).map_err(err)?
        } else {
            tolerance::tolerance_clusters(&self.inner, p).map_err(err)?.1
        };
        Ok(clusters.clusters().to_vec())
    }

    #[pyo3(signature = (normalized=true))]
    fn feature_matrix(&self, normalized: bool) -> Vec<Vec<f64>> {
        let m = FeatureMatrix::from_sessions(&self.inner, normalized);
        m.iter_rows().map(<[f64]>::to_vec).collect()
    }

    /// Vectorize, weight and cluster with fuzzy c-means.
    #[pyo3(signature = (
        alpha=0.5, m=2.0, beta=0.5, epsilon=1e-6, max_iter=300,
        weights="uniform", vectorize="normalized", label_p=0.5, merge_p=None
    ))]
    #[allow(clippy::too_many_arguments)]
    fn cluster<'py>(
        &self,
        py: Python<'py>,
        alpha: f64,
        m: f64,
        beta: f64,
        epsilon: f64,
        max_iter: usize,
        weights: &str,
        vectorize: &str,
        label_p: f64,
        merge_p: Option<f64>,
    ) -> PyResult<Bound<'py, PyDict>> {
        let options = PipelineOptions {
            vectorization: Vectorization::from_str(vectorize).map_err(err)?,
            weight_method: WeightMethod::from_str(weights).map_err(err)?,
            label_threshold: label_p,
            merge_threshold: merge_p,
            fcm: FcmConfig {
                alpha,
                m,
                init_beta: beta,
                epsilon,
                max_iter,
                ..FcmConfig::default()
            },
        };
        let out = cluster_sessions(&self.inner, &options).map_err(err)?;
        let d = fcm_dict(py, &out.result)?;
        d.set_item("weights", out.weights.weights)?;
        d.set_item("clusters", out.clusters.clusters().to_vec())?;
        Ok(d)
    }
}

fn fcm_dict<'py>(py: Python<'py>, r: &fcm::FcmResult) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    let centers: Vec<Vec<f64>> = r.centers.vectors().iter().map(|v| v.0.clone()).collect();
    d.set_item("centers", centers)?;
    d.set_item("memberships", r.memberships.to_rows())?;
    d.set_item("iterations", r.iterations)?;
    d.set_item("converged", r.converged)?;
    d.set_item("objective_trace", r.objective_trace.clone())?;
    Ok(d)
}

/// Jaccard similarity of the distinct pages of two visit sequences.
#[pyfunction]
fn jaccard(a: Vec<u16>, b: Vec<u16>) -> PyResult<f64> {
    tolerance::jaccard_similarity(&PageSet::new(a), &PageSet::new(b)).map_err(err)
}

/// Shannon entropy in bits.
#[pyfunction]
fn entropy(dist: Vec<f64>) -> PyResult<f64> {
    features::entropy(&dist).map_err(err)
}

#[pyfunction]
fn information_gain(feature: Vec<i64>, labels: Vec<i64>) -> PyResult<f64> {
    features::information_gain(&feature, &label_assignment(labels)?).map_err(err)
}

#[pyfunction]
fn split_info(feature: Vec<i64>) -> PyResult<f64> {
    features::split_info(&feature).map_err(err)
}

#[pyfunction]
fn gain_ratio(feature: Vec<i64>, labels: Vec<i64>) -> PyResult<f64> {
    features::gain_ratio(&feature, &label_assignment(labels)?).map_err(err)
}

/// Fuzzy c-means on raw points (one list per row).
#[pyfunction]
#[pyo3(signature = (
    points, alpha=0.5, m=2.0, beta=0.5, epsilon=1e-6, max_iter=300,
    weights=None, weight_method=None
))]
#[allow(clippy::too_many_arguments)]
fn run_fcm<'py>(
    py: Python<'py>,
    points: Vec<Vec<f64>>,
    alpha: f64,
    m: f64,
    beta: f64,
    epsilon: f64,
    max_iter: usize,
    weights: Option<Vec<f64>>,
    weight_method: Option<&str>,
) -> PyResult<Bound<'py, PyDict>> {
    let config = FcmConfig {
        alpha,
        m,
        init_beta: beta,
        epsilon,
        max_iter,
        weights: self::weights(weight_method, weights)?,
        ..FcmConfig::default()
    };
    let r = fcm::run_fcm(&matrix(points)?, &config).map_err(err)?;
    let d = fcm_dict(py, &r)?;
    d.set_item("clusters", fcm::harden(&r.memberships).clusters().to_vec())?;
    Ok(d)
}

/// Argmax partition of a membership matrix.
#[pyfunction]
fn harden(memberships: Vec<Vec<f64>>) -> PyResult<Vec<Vec<usize>>> {
    let u = MembershipMatrix::from_rows(&memberships).map_err(err)?;
    Ok(fcm::harden(&u).clusters().to_vec())
}

#[pyfunction]
fn purity(clusters: Vec<Vec<usize>>, labels: Vec<Vec<usize>>) -> PyResult<f64> {
    eval::purity(&partition(clusters)?, &partition(labels)?).map_err(err)
}

#[pyfunction]
fn inverse_purity(clusters: Vec<Vec<usize>>, labels: Vec<Vec<usize>>) -> PyResult<f64> {
    eval::inverse_purity(&partition(clusters)?, &partition(labels)?).map_err(err)
}

#[pyfunction]
fn purity_f(clusters: Vec<Vec<usize>>, labels: Vec<Vec<usize>>) -> PyResult<f64> {
    eval::purity_f(&partition(clusters)?, &partition(labels)?).map_err(err)
}

/// All three summary scores plus `n`.
#[pyfunction]
fn evaluate<'py>(
    py: Python<'py>,
    clusters: Vec<Vec<usize>>,
    labels: Vec<Vec<usize>>,
) -> PyResult<Bound<'py, PyDict>> {
    let r = eval::evaluate(&partition(clusters)?, &partition(labels)?, false).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("purity", r.purity)?;
    d.set_item("inverse_purity", r.inverse_purity)?;
    d.set_item("purity_f", r.purity_f)?;
    d.set_item("n", r.n)?;
    Ok(d)
}

#[pymodule]
fn pyclickclust(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySessionDataset>()?;
    m.add("TABLE1_SEQ", session::TABLE1_SEQ)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_function(wrap_pyfunction!(jaccard, m)?)?;
    m.add_function(wrap_pyfunction!(entropy, m)?)?;
    m.add_function(wrap_pyfunction!(information_gain, m)?)?;
    m.add_function(wrap_pyfunction!(split_info, m)?)?;
    m.add_function(wrap_pyfunction!(gain_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(run_fcm, m)?)?;
    m.add_function(wrap_pyfunction!(harden, m)?)?;
    m.add_function(wrap_pyfunction!(purity, m)?)?;
    m.add_function(wrap_pyfunction!(inverse_purity, m)?)?;
    m.add_function(wrap_pyfunction!(purity_f, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    Ok(())
}
