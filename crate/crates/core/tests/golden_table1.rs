//! The thirteen-session msnbc worked example at p = 0.5.

use clickclust::features::FeatureMatrix;
use clickclust::fcm::{harden, run_fcm, FcmConfig};
use clickclust::session::{dataset_stats, parse_log, DictionaryMode, SessionDataset, TABLE1_SEQ};
use clickclust::tolerance::{merge_tolerance_classes, similarity_matrix, upper_approximation};

fn table1() -> SessionDataset {
    parse_log(TABLE1_SEQ.as_bytes(), &DictionaryMode::Embedded).unwrap()
}

#[test]
fn fixture_file_matches_embedded_copy() {
    let on_disk = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/table1.seq")).unwrap();
    assert_eq!(on_disk, TABLE1_SEQ);
    assert_eq!(table1().len(), 13);
}

#[test]
fn upper_approximations() {
    let rel = upper_approximation(&similarity_matrix(&table1()), 0.5).unwrap();
    let frequent = [1, 5, 7, 11, 13];
    let expected: [(usize, &[usize]); 11] = [
        (1, &frequent),
        (2, &[2]),
        (3, &[3]),
        (4, &[4]),
        (6, &[6, 8]),
        (8, &[6, 8]),
        (9, &[9]),
        (10, &[10]),
        (11, &frequent),
        (12, &[12]),
        (13, &frequent),
    ];
    for (id, class) in expected {
        assert_eq!(rel.class_of(id), class, "R(T{id})");
    }
    // The reference R(T5) omits T7 and R(T7) omits T5, although T1, T5, T7,
    // T11 and T13 all have page set {1}. Any symmetric relation containing
    // the reference R(T1) must put both in each other's class.
    assert_eq!(rel.class_of(5), &frequent);
    assert_eq!(rel.class_of(7), &frequent);
}

#[test]
fn merged_clusters() {
    let rel = upper_approximation(&similarity_matrix(&table1()), 0.5).unwrap();
    let clusters = merge_tolerance_classes(&rel);
    let expected: Vec<Vec<usize>> = vec![
        vec![1, 5, 7, 11, 13],
        vec![2],
        vec![3],
        vec![4],
        vec![6, 8],
        vec![9],
        vec![10],
        vec![12],
    ];
    assert_eq!(clusters.clusters(), expected.as_slice());
}

#[test]
fn identical_page_sets_merge_at_p_one() {
    let rel = upper_approximation(&similarity_matrix(&table1()), 1.0).unwrap();
    let clusters = merge_tolerance_classes(&rel);
    assert!(clusters.clusters().contains(&vec![1, 5, 7, 11, 13]));
    assert!(clusters.clusters().contains(&vec![6, 8]));
    assert_eq!(clusters.len(), 8);
}

#[test]
fn stats() {
    let st = dataset_stats(&table1());
    assert_eq!(st.num_sessions, 13);
    assert_eq!(st.total_visits, 53);
    assert!((st.avg_visits - 4.0769).abs() < 1e-4);
}

#[test]
fn entropy_init_and_fcm_on_normalized_vectors() {
    let points = FeatureMatrix::from_sessions(&table1(), true);
    let weights = clickclust::features::FeatureWeights::uniform(points.cols());
    let centers = clickclust::fcm::entropy_init(&points, 0.5, &weights).unwrap();
    assert!(centers.c() >= 2);
    for k in 0..centers.c() {
        assert!(points.iter_rows().any(|r| r == centers.get(k)), "center {k} is not a data point");
    }

    let result = run_fcm(&points, &FcmConfig::default()).unwrap();
    let hard = harden(&result.memberships);
    let cluster_of = hard.assignment();
    for id in [5, 7, 11, 13] {
        assert_eq!(cluster_of[&id], cluster_of[&1]);
    }
    assert_eq!(cluster_of[&6], cluster_of[&8]);
}
