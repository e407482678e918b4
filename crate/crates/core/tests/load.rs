use std::path::{Path, PathBuf};

use revtan::manifold::load::{load_atlas, load_bundle, load_field, load_map, load_metric, parse_atlas, resolve_atlas};
use revtan::manifold::ManifoldPoint;
use revtan::Error;

struct Scratch(PathBuf);

impl Scratch {
    fn new(tag: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("revtan-load-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        Scratch(dir)
    }

    fn write(&self, name: &str, text: &str) -> PathBuf {
        let path = self.0.join(name);
        std::fs::write(&path, text).unwrap();
        path
    }
}

impl Drop for Scratch {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

const LINE: &str = r#"{"dim": 1, "charts": [{"id": "a", "box": [[-1.0, 1.0]]}, {"id": "b", "box": [[0.0, 4.0]]}],
  "transitions": [
    {"from": "a", "to": "b", "map": "(map 1 1 (+ (* 2 x0) 2))", "overlap_box": [[-1.0, 1.0]]},
    {"from": "b", "to": "a", "map": "(map 1 1 (+ (* 1/2 x0) -1))", "overlap_box": [[0.0, 4.0]]}]}"#;

fn mobius(twist: i64) -> String {
    format!(
        r#"{{"atlas": "builtin:circle", "fibre_dim": 1, "transitions": [
  {{"from": "0", "to": "1", "box": [[0.0, 0.5]], "matrix": "(map 1 1 1)"}},
  {{"from": "0", "to": "1", "box": [[0.5, 1.0]], "matrix": "(map 1 1 {twist})"}},
  {{"from": "1", "to": "0", "box": [[0.0, 0.5]], "matrix": "(map 1 1 1)"}},
  {{"from": "1", "to": "0", "box": [[-0.5, 0.0]], "matrix": "(map 1 1 -1)"}}]}}"#
    )
}

#[test]
fn a_valid_atlas_loads() {
    let atlas = parse_atlas(LINE, "line.json").unwrap();
    assert_eq!((atlas.dim, atlas.charts.len(), atlas.transitions.len()), (1, 2, 2));
    assert_eq!(atlas.chart_index("b"), Some(1));
}

#[test]
fn a_folding_transition_fails_the_cocycle_check() {
    let folded = LINE.replace("(+ (* 1/2 x0) -1)", "(* x0 x0 x0)");
    match parse_atlas(&folded, "folded.json") {
        Err(Error::Invariant { name, .. }) => assert!(name.starts_with("atlas_"), "{name}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn format_errors_name_the_file_and_line() {
    let err = parse_atlas("{\"dim\": 1,\n \"charts\": 3}", "bad.json").unwrap_err();
    let msg = err.to_string();
    assert!(msg.starts_with("bad.json: line 2"), "{msg}");
    let err = parse_atlas(&LINE.replace("\"id\": \"b\"", "\"id\": \"c\""), "ids.json").unwrap_err();
    assert!(err.to_string().contains("unknown chart \"b\""), "{err}");
    assert!(matches!(load_atlas(Path::new("/nonexistent/atlas.json")), Err(Error::Format { .. })));
}

#[test]
fn builtin_atlas_references() {
    let here = Path::new("x.json");
    assert_eq!(resolve_atlas("builtin:torus", here).unwrap().charts.len(), 4);
    assert_eq!(resolve_atlas("builtin:R3", here).unwrap().dim, 3);
    assert!(resolve_atlas("builtin:klein", here).is_err());
}

#[test]
fn maps_resolve_atlases_relative_to_their_file() {
    let s = Scratch::new("map");
    s.write("line.json", LINE);
    let path = s.write(
        "shift.json",
        r#"{"source": "line.json", "target": "builtin:R1",
            "representatives": [{"from": "a", "to": "R", "box": [[-1.0, 1.0]], "map": "(map 1 1 (* 3 x0))"},
                                {"from": "b", "to": "R", "box": [[0.0, 4.0]], "map": "(map 1 1 (+ (* 3/2 x0) -3))"}]}"#,
    );
    let f = load_map(&path).unwrap();
    let y = f.apply(&ManifoldPoint { chart: 1, coords: vec![3.0] }).unwrap();
    assert!((y.coords[0] - 1.5).abs() < 1e-12);

    let bad = s.write("bad.json", &std::fs::read_to_string(&path).unwrap().replace("-3))", "-2))"));
    assert!(matches!(load_map(&bad), Err(Error::Invariant { name, .. }) if name == "map_overlap_agreement"));
    let arity = s.write("arity.json", &std::fs::read_to_string(&path).unwrap().replace("(map 1 1 (* 3 x0))", "(map 2 1 (* 3 x0))"));
    assert!(load_map(&arity).is_err());
}

#[test]
fn fields_and_metrics() {
    let s = Scratch::new("field");
    let field = s.write(
        "dtheta.json",
        r#"{"atlas": "builtin:circle", "components": [{"chart": "0", "map": "(map 1 1 1)"}, {"chart": "1", "map": "(map 1 1 1)"}]}"#,
    );
    let w = load_field(&field).unwrap();
    assert!(w.section_law());
    let wrong = s.write("wrong.json", &std::fs::read_to_string(&field).unwrap().replacen("(map 1 1 1)", "(map 1 1 2)", 1));
    assert!(matches!(load_field(&wrong), Err(Error::Invariant { name, .. }) if name == "field_overlap_compatibility"));

    let sphere = resolve_atlas("builtin:sphere", &field).unwrap();
    let euclid = s.write("euclid.json", "\"euclidean\"");
    assert!(load_metric(&euclid, sphere.clone()).is_ok());
    let charts =
        s.write("scaled.json", r#"{"charts": [{"chart": "N", "map": "(map 2 4 2 0 0 2)"}, {"chart": "S", "map": "(map 2 4 1 0 0 -1)"}]}"#);
    assert!(matches!(load_metric(&charts, sphere), Err(Error::Invariant { name, .. }) if name == "metric_positive_definite"));
}

#[test]
fn cocycle_bundles() {
    let s = Scratch::new("bundle");
    let good = load_bundle(&s.write("mobius.json", &mobius(-1))).unwrap();
    assert_eq!(good.fibre_dim, 1);
    match load_bundle(&s.write("twisted.json", &mobius(2))) {
        Err(Error::Invariant { name, .. }) => assert!(name.contains("cocycle"), "{name}"),
        other => panic!("{other:?}"),
    }
}
