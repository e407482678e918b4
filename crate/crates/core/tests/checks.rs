use revtan::checks::generators::{algebra_morphisms, algebras, composable_pairs, smooth_maps, GENERATOR_VERSION};
use revtan::checks::{run, CheckConfig, Status, SCHEMA_VERSION, SUITES};
use revtan::sample::Method;
use revtan::Error;

#[test]
fn generator_suite_is_large_enough() {
    let maps = smooth_maps();
    assert!(maps.len() >= 12);
    let pairs = composable_pairs(&maps);
    assert!(pairs.iter().all(|((_, f), (_, g))| f.cod() == g.dom()));
    let expected = maps.iter().map(|(_, f)| maps.iter().filter(|(_, g)| g.dom() == f.cod()).count()).sum::<usize>();
    assert_eq!(pairs.len(), expected);
    assert_eq!(algebras().len(), 4);
    assert!(algebra_morphisms().len() >= 5);
    assert_eq!(GENERATOR_VERSION, 1);
}

#[test]
fn every_suite_passes_with_the_default_config() {
    let cfg = CheckConfig::default();
    for suite in SUITES {
        let report = run(suite, &cfg).unwrap();
        let failures: Vec<_> = report.failures().map(|e| (&e.law, &e.note)).collect();
        assert!(report.all_pass(), "{suite}: {failures:?}");
        assert!(!report.entries.is_empty());
        assert!(report.entries.iter().all(|e| e.law.starts_with(&format!("{suite}.")) && e.seed == cfg.seed));
    }
}

#[test]
fn reports_are_sorted_and_reproducible() {
    let cfg = CheckConfig { seed: 7, ..CheckConfig::default() };
    let a = run("manifold", &cfg).unwrap();
    let b = run("manifold", &cfg).unwrap();
    assert_eq!(a.to_json(), b.to_json());
    assert!(a.entries.windows(2).all(|w| w[0].law < w[1].law));
    let json: serde_json::Value = serde_json::from_str(&a.to_json()).unwrap();
    assert_eq!(json["schema"], SCHEMA_VERSION);
    assert_eq!(json["seed"], 7);
    assert_eq!(json["entries"][0]["status"], "pass");
}

#[test]
fn an_impossible_tolerance_fails_sampled_laws_only() {
    let cfg = CheckConfig { tol: -1.0, ..CheckConfig::default() };
    let report = run("smooth", &cfg).unwrap();
    assert!(!report.all_pass());
    for e in &report.entries {
        match e.method {
            Method::Numeric => assert_eq!(e.status, Status::Fail, "{}", e.law),
            _ => assert_eq!(e.status, Status::Pass, "{}", e.law),
        }
    }
}

#[test]
fn unknown_suite() {
    assert!(matches!(run("geometry", &CheckConfig::default()), Err(Error::Unsupported(_))));
}
