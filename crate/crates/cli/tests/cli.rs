use std::path::PathBuf;
use std::process::Command;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name).display().to_string()
}

fn revtan(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_revtan")).args(args).output().expect("revtan runs");
    (out.status.code().expect("exit code"), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

#[test]
fn vjp_of_the_product_pair() {
    let (code, out, _) = revtan(&["vjp", "(map 2 2 (* x0 x1) (+ x0 x1))", "2,3", "1,1"]);
    assert_eq!((code, out.as_str()), (0, "(4, 3)\n"));
}

#[test]
fn jvp_and_eval_from_a_file() {
    let (code, out, _) = revtan(&["jvp", &data("prodsum.map"), "2,3", "1,2"]);
    assert_eq!((code, out.as_str()), (0, "(7, 3)\n"));
    let (code, out, _) = revtan(&["eval", &data("prodsum.map"), "(1/2, 4)"]);
    assert_eq!((code, out.as_str()), (0, "(2, 9/2)\n"));
    let (_, out, _) = revtan(&["eval", "(map 1 1 (exp x0))", "1"]);
    assert!(out.starts_with("(2.718281828459045"), "{out}");
}

#[test]
fn etale_double_cover() {
    let (code, out, _) = revtan(&["etale", &data("double_cover.json")]);
    assert_eq!((code, out.as_str()), (0, "etale: true, min |det| = 2\n"));
}

#[test]
fn pulled_back_angle_form_is_doubled() {
    let (code, out, _) = revtan(&["pullback-form", &data("double_cover.json"), &data("angle_form.json")]);
    assert_eq!(code, 0);
    let pieces: Vec<&str> = out.lines().filter(|l| l.starts_with("chart")).collect();
    assert_eq!(pieces.len(), 6);
    assert!(pieces.iter().all(|l| l.ends_with("(map 1 1 2)")), "{out}");
    assert!(out.ends_with("section law: true\n"));
}

#[test]
fn optimizer_reaches_the_south_pole() {
    let (code, out, _) = revtan(&["optimize", &data("sphere_height.json"), "builtin:sphere", &data("euclidean.json")]);
    assert_eq!(code, 0);
    assert!(out.contains("value: -1.000000000000"), "{out}");
    assert!(out.contains("monotone: true"));
}

#[test]
fn check_and_report_round_trip() {
    let path = std::env::temp_dir().join(format!("revtan-cli-{}.json", std::process::id()));
    let p = path.display().to_string();
    let (code, out, _) = revtan(&["check", "algebra", "--seed", "3", "--json", &p]);
    assert_eq!(code, 0);
    assert!(out.starts_with("suite algebra seed 3: "), "{out}");
    let (code, again, _) = revtan(&["report", "--json", &p]);
    std::fs::remove_file(&path).ok();
    assert_eq!(code, 0);
    assert_eq!(out, again);
}

#[test]
fn failing_checks_exit_one() {
    let (code, out, _) = revtan(&["check", "smooth", "--tol=-1"]);
    assert_eq!(code, 1);
    assert!(out.lines().any(|l| l.starts_with("FAIL smooth.")), "{out}");
}

#[test]
fn usage_and_parse_errors_exit_two() {
    assert_eq!(revtan(&["frobnicate"]).0, 2);
    assert_eq!(revtan(&["check", "geometry"]).0, 2);
    let (code, _, err) = revtan(&["eval", "(map 1 1 (+ x0", "1"]);
    assert_eq!(code, 2);
    assert!(err.contains("syntax error at line 1"), "{err}");
    let (code, _, err) = revtan(&["eval", &data("bad_arity.map"), "1,2"]);
    assert_eq!(code, 2);
    assert!(err.contains("dimension mismatch"), "{err}");
    assert_eq!(revtan(&["vjp", "(map 2 1 x0)", "1,2", "1,1"]).0, 2);
}

#[test]
fn singular_atlas_names_the_failed_check() {
    let (code, _, err) = revtan(&["optimize", &data("sphere_height.json"), &data("singular_atlas.json"), &data("euclidean.json")]);
    assert_eq!(code, 2);
    assert!(err.contains("atlas_cocycle"), "{err}");
}

#[test]
fn missing_files_exit_three() {
    assert_eq!(revtan(&["etale", "/nonexistent/map.json"]).0, 3);
    assert_eq!(revtan(&["eval", "/nonexistent/f.map", "1"]).0, 3);
    assert_eq!(revtan(&["report", "--json", "/nonexistent/r.json"]).0, 3);
}
