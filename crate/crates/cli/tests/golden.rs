use std::path::PathBuf;
use std::process::Command;

fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_msset"))
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn print_lines(file: &str) -> String {
    let text = std::fs::read_to_string(golden(file)).unwrap();
    let mut args = vec!["print"];
    args.extend(text.lines());
    let (code, out, err) = run(&args);
    assert_eq!(code, 0, "{err}");
    out
}

#[test]
fn printing_normalizes_to_the_golden_forms() {
    let want = std::fs::read_to_string(golden("expressions.txt")).unwrap();
    assert_eq!(want.lines().count(), 50);
    assert_eq!(print_lines("expressions_input.txt"), want);
    assert_eq!(print_lines("expressions.txt"), want);
}

#[test]
fn lattice_path_diagrams() {
    let simplex = "([0 1 2 3 3 3],[0 0 0 0 1 2])";
    for (format, file) in [("ascii", "diagram_pi32.txt"), ("svg", "diagram_pi32.svg")] {
        let (code, out, _) = run(&[
            "diagram",
            "prod(delta 3, delta 2)",
            "--simplex",
            simplex,
            "--format",
            format,
        ]);
        assert_eq!(code, 0);
        assert_eq!(out, std::fs::read_to_string(golden(file)).unwrap());
    }
}

#[test]
fn filtration_certificate() {
    let (code, out, _) = run(&["verify", "filtration", "-1", "0"]);
    assert_eq!(code, 0);
    assert_eq!(
        out,
        std::fs::read_to_string(golden("filtration_-1_0.json")).unwrap()
    );
}

#[test]
fn errors_are_json_with_exit_code_two() {
    let (code, out, err) = run(&["build", "horn(2,5)"]);
    assert_eq!((code, out.as_str()), (2, ""));
    let v: serde_json::Value = serde_json::from_str(&err).unwrap();
    assert_eq!(v["error"]["kind"], "range");
    assert!(v["error"]["message"]
        .as_str()
        .unwrap()
        .contains("0 <= k <= m"));
    let (code, _, err) = run(&["marks", "join(delta 1,"]);
    assert_eq!(code, 2);
    let v: serde_json::Value = serde_json::from_str(&err).unwrap();
    assert_eq!(v["error"]["kind"], "syntax");
    assert_eq!(v["error"]["start"], 13);
    let (code, _, err) = run(&["frobnicate"]);
    assert_eq!(code, 2);
    assert!(err.starts_with("{\"error\":{\"kind\":\"usage\""));
}

#[test]
fn failing_checks_exit_with_one() {
    let (code, out, _) = run(&["check", "horn(2,1)", "--complicial", "2"]);
    assert_eq!(code, 1);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(!v["failures"].as_array().unwrap().is_empty());
    let (code, _, _) = run(&["check", "delta 0", "--saturated", "3", "-1"]);
    assert_eq!(code, 0);
}

#[test]
fn tensor_marks_of_the_worked_example() {
    let (code, out, _) = run(&["marks", "tensor(deltat 2, delta 1)", "--dim", "2"]);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l == "([0 1 2],[0 1 1])"));
    assert!(!out.lines().any(|l| l == "([0 1 2],[0 0 1])"));
}
