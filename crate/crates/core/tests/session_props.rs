use clickclust::session::{
    dataset_stats, parse_log, CategoryDictionary, DictionaryMode, SessionDataset, TABLE1_SEQ,
};
use proptest::prelude::*;

fn dataset() -> impl Strategy<Value = SessionDataset> {
    (1usize..30).prop_flat_map(|k| {
        prop::collection::vec(prop::collection::vec(1..=k as u16, 1..20), 1..40).prop_map(move |rows| {
            let dict = CategoryDictionary::new((1..=k).map(|i| format!("cat{i}"))).unwrap();
            SessionDataset::new(dict, rows).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn canonical_round_trip(data in dataset()) {
        let text = data.to_canonical();
        let back = parse_log(text.as_bytes(), &DictionaryMode::Embedded).unwrap();
        prop_assert_eq!(back, data);
    }

    #[test]
    fn total_on_arbitrary_bytes(bytes in prop::collection::vec(any::<u8>(), 0..400)) {
        let _ = parse_log(&bytes, &DictionaryMode::Embedded);
        let _ = parse_log(&bytes, &DictionaryMode::External(CategoryDictionary::msnbc()));
    }

    #[test]
    fn total_on_sequence_like_text(text in "[0-9 %a\\n\\t]{0,300}") {
        let _ = parse_log(text.as_bytes(), &DictionaryMode::Embedded);
        let _ = parse_log(text.as_bytes(), &DictionaryMode::External(CategoryDictionary::msnbc()));
    }

    #[test]
    fn session_count_equals_data_rows(
        rows in prop::collection::vec(prop::collection::vec(1u16..=17, 1..10), 1..30),
        noise in prop::collection::vec(0u8..3, 30),
    ) {
        // interleave comments and blank lines with data rows
        let mut text = String::new();
        for (row, kind) in rows.iter().zip(noise.iter().cycle()) {
            match kind {
                0 => text.push_str("% comment\n"),
                1 => text.push_str("   \n"),
                _ => {}
            }
            let line: Vec<String> = row.iter().map(u16::to_string).collect();
            text.push_str(&line.join("  "));
            text.push('\n');
        }
        let data = parse_log(text.as_bytes(), &DictionaryMode::External(CategoryDictionary::msnbc())).unwrap();
        prop_assert_eq!(dataset_stats(&data).num_sessions, rows.len());
        let st = dataset_stats(&data);
        prop_assert!(st.length_min as f64 <= st.avg_visits && st.avg_visits <= st.length_max as f64);
    }
}

#[test]
fn bundled_fixture_parses_with_external_dictionary() {
    let data = parse_log(TABLE1_SEQ.as_bytes(), &DictionaryMode::External(CategoryDictionary::msnbc())).unwrap();
    assert_eq!(data.len(), 13);
    assert_eq!(data.sessions()[9].visits, vec![6, 9, 4, 4, 4, 10, 3, 10, 5, 10, 4, 4, 4]);
}
