mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tro_core::ns;
use tro_core::rdf::{parse_turtle, serialize_turtle};
use tro_core::validate::check;
use tro_core::vocab::{
    builtin_vocabulary, subclass_closure, vocabulary_graph, SchemaConstraint, VocabError,
};

proptest! {
    #[test]
    fn closure_matches_reachability(seed in any::<u64>(), n in 1usize..12) {
        let (v, edges) = common::random_hierarchy(&mut ChaCha8Rng::seed_from_u64(seed), n);
        let reach = common::reachability(n, &edges);
        for (i, row) in reach.iter().enumerate() {
            let closure = subclass_closure(&v, &common::class_iri(i)).unwrap();
            for (j, reachable) in row.iter().enumerate() {
                prop_assert_eq!(closure.contains(&common::class_iri(j)), *reachable, "C{} -> C{}", i, j);
            }
            prop_assert_eq!(closure.len(), row.iter().filter(|r| **r).count());
        }
    }

    #[test]
    fn adding_an_edge_only_grows_closures(seed in any::<u64>(), n in 2usize..10, a in 0usize..10, b in 0usize..10) {
        let (v, mut edges) = common::random_hierarchy(&mut ChaCha8Rng::seed_from_u64(seed), n);
        let (a, b) = (a % n, b % n);
        let (hi, lo) = (a.max(b), a.min(b));
        prop_assume!(hi != lo);
        edges.push((hi, lo));
        let grown = common::hierarchy(n, &edges);
        for i in 0..n {
            let c = common::class_iri(i);
            prop_assert!(v.subclass_closure(&c).unwrap().is_subset(grown.subclass_closure(&c).unwrap()));
        }
    }
}

#[test]
fn cycles_are_rejected() {
    let (v, _) = common::random_hierarchy(&mut ChaCha8Rng::seed_from_u64(3), 3);
    let err = v
        .with_constraints([
            SchemaConstraint::SubClassOf {
                sub: common::class_iri(0),
                sup: common::class_iri(2),
            },
            SchemaConstraint::SubClassOf {
                sub: common::class_iri(2),
                sup: common::class_iri(0),
            },
        ])
        .unwrap_err();
    assert!(matches!(err, VocabError::Cycle(_)), "{err:?}");
}

#[test]
fn evidence_kinds_are_evidence() {
    let v = builtin_vocabulary();
    let closure = v.subclass_closure(&ns::tro("NewsArticle")).unwrap();
    assert!(closure.contains(&ns::tro("Evidence")));
    assert!(!closure.contains(&ns::tro("Role")));
    assert!(v.subclass_closure(&ns::tro("Nope")).is_err());
}

#[test]
fn vocabulary_graph_round_trips_and_is_clean() {
    let v = builtin_vocabulary();
    let g = vocabulary_graph(&v);
    let text = serialize_turtle(&g);
    assert!(parse_turtle(&text).unwrap().same_triples(&g));
    let report = check(&g, &v);
    assert_eq!(report.counts().error, 0, "{}", report.to_text());
    assert_eq!(report.counts().warn, 0, "{}", report.to_text());
}

#[test]
fn shipped_ontology_file_is_current() {
    let shipped = include_str!("../data/tro.ttl");
    assert_eq!(
        shipped,
        serialize_turtle(&vocabulary_graph(&builtin_vocabulary()))
    );
}
