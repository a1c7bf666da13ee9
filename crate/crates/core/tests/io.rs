use std::fs;

use xclust_core::ingest::{load_dataset_file, load_embedding_file};
use xclust_core::synthetic::{planted_blobs, PlantedConfig};
use xclust_core::{
    load_dataset, load_embedding, pca_embedding, AttributeType, Error, Hyperparameters, Linkage,
    SchemaSpec, SearchBudget, Session, SessionData, SolutionDocument,
};

const CSV: &str = "\
age,smoker,city,score
34,yes,Paris,1.5
51,no,Rome,2.0
29,yes,Oslo,0.5
62,no,Paris,3.5
45,yes,Rome,2.5
38,no,Oslo,1.0
";

#[test]
fn loads_files_with_inferred_types() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("d.csv");
    let emb = dir.path().join("e.csv");
    fs::write(&data, CSV).unwrap();
    fs::write(&emb, "x,y\n0,0\n1,0\n0,1\n9,9\n9,8\n8,9\n").unwrap();
    let loaded = load_dataset_file(&data, None).unwrap();
    let d = loaded.dataset;
    let names: Vec<&str> = d.schema().iter().map(|a| a.name.as_str()).collect();
    assert_eq!(names, ["age", "smoker", "city=Oslo", "city=Paris", "city=Rome", "score"]);
    assert_eq!(d.attribute(0).kind, AttributeType::Real);
    assert_eq!(d.attribute(1).kind, AttributeType::Boolean);
    assert_eq!(d.value(0, 1), 1.0);
    assert_eq!(d.value(0, 3), 1.0);
    let e = load_embedding_file(&emb, d.n()).unwrap();
    assert_eq!(e.point(3), [9.0, 9.0]);
    assert!(matches!(
        load_embedding("0,0\n1,1\n", d.n()),
        Err(Error::RowCountMismatch { expected: 6, actual: 2 })
    ));
}

#[test]
fn declared_schema_overrides_inference() {
    let schema = SchemaSpec::from_json(r#"{"age": "ignore", "smoker": "boolean", "city": "ignore", "score": "real"}"#).unwrap();
    let d = load_dataset(CSV, Some(&schema)).unwrap().dataset;
    assert_eq!(d.m(), 2);
    assert_eq!(d.attribute(1).name, "score");
    let bad = SchemaSpec::from_json(r#"{"height": "real"}"#).unwrap();
    assert!(load_dataset(CSV, Some(&bad)).is_err());
}

#[test]
fn missing_value_is_reported_with_position() {
    let text = "a,b\n1,2\n3,\n5,6\n";
    match load_dataset(text, None) {
        Err(Error::MissingValue { row, column }) => {
            assert_eq!(row, 2);
            assert_eq!(column, "b");
        }
        other => panic!("{other:?}"),
    }
}

fn session(seed: u64) -> Session {
    let f = planted_blobs(&PlantedConfig {
        points_per_blob: 25,
        seed,
        ..Default::default()
    });
    Session::new(SessionData::new("s", f.dataset, f.embedding, Linkage::Single, 1e-4).unwrap())
}

#[test]
fn document_file_round_trip_restores_solution() {
    let mut s = session(1);
    let hp = Hyperparameters::new(50.0, 1.4);
    let published = s.recalc(&hp, &SearchBudget::iterations(8)).unwrap();
    s.publish(published);
    let doc = s.document();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("solution.json");
    doc.save(&path).unwrap();
    let loaded = SolutionDocument::load(&path).unwrap();
    assert_eq!(loaded, doc);
    assert_eq!(loaded.to_canonical_string(), fs::read_to_string(&path).unwrap());

    let mut fresh = session(1);
    fresh.restore(&loaded).unwrap();
    let a = &s.current.as_ref().unwrap().solution;
    let b = &fresh.current.as_ref().unwrap().solution;
    assert_eq!(a.cut_set, b.cut_set);
    assert_eq!(a.labels(), b.labels());
    assert_eq!(a.si, b.si);
    assert_eq!(fresh.document().to_canonical_string(), doc.to_canonical_string());
}

#[test]
fn modified_dataset_is_rejected() {
    let mut s = session(2);
    let published = s.recalc(&Hyperparameters::default(), &SearchBudget::iterations(4)).unwrap();
    s.publish(published);
    let doc = s.document();
    let mut other = session(3);
    assert!(matches!(other.restore(&doc), Err(Error::SchemaHashMismatch { .. })));
    assert!(other.current.is_none());
}

#[test]
fn unsupported_version_is_rejected() {
    let doc = session(4).document();
    let text = doc.to_canonical_string().replacen("\"version\": 1", "\"version\": 7", 1);
    assert!(matches!(
        SolutionDocument::parse(&text),
        Err(Error::VersionMismatch { expected: 1, found: 7 })
    ));
}

#[test]
fn empty_session_round_trips() {
    let s = session(5);
    let doc = s.document();
    assert!(doc.cutset.is_empty() && doc.scores.is_none());
    let parsed = SolutionDocument::parse(&doc.to_canonical_string()).unwrap();
    assert_eq!(parsed, doc);
    let mut fresh = session(5);
    fresh.restore(&parsed).unwrap();
    assert!(fresh.current.is_none());
}

#[test]
fn session_recalc_is_deterministic_and_refine_needs_solution() {
    let s = session(6);
    let hp = Hyperparameters::new(10.0, 1.5);
    assert!(s.refine(&hp, &SearchBudget::iterations(3)).unwrap().is_none());
    let a = s.recalc(&hp, &SearchBudget::iterations(10)).unwrap();
    let b = s.recalc(&hp, &SearchBudget::iterations(10)).unwrap();
    assert_eq!(a.solution, b.solution);
    assert_eq!(a.hyperparameters.linkage, Linkage::Single);
}

#[test]
fn pca_embedding_feeds_a_session() {
    let f = planted_blobs(&PlantedConfig {
        points_per_blob: 20,
        ..Default::default()
    });
    let e = pca_embedding(&f.dataset).unwrap();
    assert_eq!(e.n(), f.dataset.n());
    let s = Session::new(SessionData::new("p", f.dataset, e, Linkage::Average, 1e-4).unwrap());
    let p = s.recalc(&Hyperparameters::default(), &SearchBudget::iterations(5)).unwrap();
    assert!(p.solution.k() >= 1);
}
