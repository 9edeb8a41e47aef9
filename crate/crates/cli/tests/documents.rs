use ifsx_cli::{parse_document, serialize_document, DocumentError};
use ifsx_core::{IfsSystem, OrthogonalMap, OscAttribute, Point, Scalar, Similitude};
use proptest::prelude::*;

/// Signed permutation matrix with rational entries.
fn signed_perm(perm: &[usize], signs: &[bool]) -> OrthogonalMap {
    let d = perm.len();
    let rows = (0..d)
        .map(|r| {
            (0..d)
                .map(|c| match (c == perm[r], signs[r]) {
                    (false, _) => Scalar::integer(0),
                    (true, false) => Scalar::integer(1),
                    (true, true) => Scalar::integer(-1),
                })
                .collect()
        })
        .collect();
    OrthogonalMap::from_rows(rows).unwrap()
}

fn system_strategy() -> impl Strategy<Value = IfsSystem> {
    (1usize..=2).prop_flat_map(|d| {
        let map = (
            1i64..=9,
            2i64..=12,
            Just((0..d).collect::<Vec<_>>()).prop_shuffle(),
            proptest::collection::vec(any::<bool>(), d),
            proptest::collection::vec((-20i64..=20, 1i64..=15), d),
        )
            .prop_filter("contracting", |(p, q, ..)| p < q)
            .prop_map(|(p, q, perm, signs, t)| {
                Similitude::new(Scalar::ratio(p, q), signed_perm(&perm, &signs), Point::from_ratios(&t)).unwrap()
            });
        (proptest::collection::vec(map, 2..=5), any::<bool>())
            .prop_map(|(maps, osc)| {
                let sys = IfsSystem::new(maps).unwrap();
                if osc {
                    sys.with_osc(OscAttribute::Declared)
                } else {
                    sys
                }
            })
    })
}

proptest! {
    #[test]
    fn serialize_then_parse_is_identity(sys in system_strategy()) {
        let text = serialize_document(&sys).unwrap();
        let back = parse_document(&text).unwrap();
        prop_assert_eq!(&back, &sys);
        prop_assert_eq!(back.osc(), sys.osc());
        prop_assert_eq!(serialize_document(&back).unwrap(), text);
    }
}

#[test]
fn rejects_invalid_documents() {
    let one_map = r#"{"dimension": 1, "mode": "exact", "maps": [
        {"ratio": "1/2", "orthogonal": [["1"]], "translation": ["0"]}]}"#;
    assert!(matches!(parse_document(one_map), Err(DocumentError::Invalid { .. })));
    let float = one_map.replace("\"0\"]}]", "\"0.5\"]}, {\"ratio\": \"1/2\", \"orthogonal\": [[\"1\"]], \"translation\": [\"1\"]}]");
    match parse_document(&float) {
        Err(DocumentError::Invalid { message, .. }) => assert!(message.contains("malformed rational"), "{message}"),
        other => panic!("{other:?}"),
    }
    let unknown = r#"{"dimension": 1, "mode": "exact", "extra": 1, "maps": []}"#;
    assert!(matches!(parse_document(unknown), Err(DocumentError::Syntax { .. })));
}
