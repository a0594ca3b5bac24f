use std::fs;

use treeprob::numeric::NumericConfig;
use treeprob::pipeline::{reproduce, PipelineError, ReproduceConfig, CORPUS};

#[test]
fn every_claim_holds() {
    let claims = reproduce(&ReproduceConfig::default()).unwrap();
    assert_eq!(claims.len(), 8);
    for c in &claims {
        println!("{:<24} {:<5} {}", c.name, c.pass, c.observed);
    }
    assert!(claims.iter().all(|c| c.pass));
}

#[test]
fn loose_tolerance_still_passes() {
    let cfg = ReproduceConfig { numeric: NumericConfig { tol: 1e-2, ..NumericConfig::default() }, ..ReproduceConfig::default() };
    assert!(reproduce(&cfg).unwrap().iter().all(|c| c.pass));
}

#[test]
fn corpus_directory_is_used() {
    let dir = tempfile::tempdir().unwrap();
    for (name, text) in CORPUS {
        fs::write(dir.path().join(name), text).unwrap();
    }
    let cfg = ReproduceConfig { corpus_dir: Some(dir.path().to_path_buf()), ..ReproduceConfig::default() };
    assert!(reproduce(&cfg).unwrap().iter().all(|c| c.pass));

    fs::write(dir.path().join("L3.gta"), "alphabet a b\nstates q1\ninitial q9\n").unwrap();
    match reproduce(&cfg) {
        Err(PipelineError::Automaton { name, .. }) => assert!(name.ends_with("L3.gta")),
        other => panic!("expected a parse error, got {other:?}"),
    }
}
