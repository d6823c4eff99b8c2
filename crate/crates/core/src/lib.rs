//! Clustering toolkit for web-usage session logs.
//!
//! * [`session`] parses msnbc-style page-category sequence logs.
//! * [`features`] turns sessions into page sets and frequency vectors and
//!   computes entropy, information gain and gain-ratio feature weights.
//! * [`tolerance`] clusters sessions by thresholded Jaccard similarity:
//!   upper approximations, merged to a stable partition.
//! * [`fcm`] is a fuzzy c-means variant with entropy-based center selection,
//!   weighted distances and membership-thresholded center updates.
//! * [`eval`] scores a partition against reference classes (purity, inverse
//!   purity, Purity-F).
//!
//! ```
//! use clickclust::session::{parse_log, DictionaryMode, TABLE1_SEQ};
//! use clickclust::tolerance::tolerance_clusters;
//!
//! let data = parse_log(TABLE1_SEQ.as_bytes(), &DictionaryMode::Embedded).unwrap();
//! let (_, clusters) = tolerance_clusters(&data, 0.5).unwrap();
//! assert_eq!(clusters.clusters()[0], vec![1, 5, 7, 11, 13]);
//! ```

pub mod cluster;
pub mod error;
pub mod eval;
pub mod fcm;
pub mod features;
pub mod pipeline;
pub mod session;
pub mod tolerance;

pub use cluster::ClusterSet;
pub use error::{Error, Result};
