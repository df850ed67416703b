use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn example(name: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../docs/examples").join(name);
    root.to_string_lossy().into_owned()
}

fn ussp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ussp")).args(args).env_remove("USSP_CAP").output().expect("binary runs")
}

fn ussp_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_ussp"))
        .args(args)
        .env_remove("USSP_CAP")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

#[test]
fn examples_validate() {
    for name in ["dvr.json", "s3-a3.json", "z4-over-z2.json"] {
        let out = ussp(&["validate", &example(name)]);
        assert_eq!(out.status.code(), Some(0), "{name}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn output_is_byte_identical_across_runs() {
    for format in ["text", "json", "csv"] {
        let a = ussp(&["--format", format, "pages", &example("z4-over-z2.json")]);
        let b = ussp(&["--format", format, "pages", &example("z4-over-z2.json")]);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn adelic_on_the_two_point_example() {
    let out = ussp(&["--format", "csv", "adelic", &example("s3-a3.json")]);
    assert_eq!(out.status.code(), Some(0));
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.contains("summary,2,2"), "{s}");
    assert!(s.contains("verdicts,the map is a bijection,true"));
}

#[test]
fn engine_limits_exit_with_two() {
    let out = ussp(&["--cap", "1", "torsors", &example("s3-a3.json")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error: engine limit"));
}

#[test]
fn rejected_inputs_exit_with_one() {
    let missing = ussp(&["pages", "/nonexistent/instance.json"]);
    assert_eq!(missing.status.code(), Some(1));
    let wrong_kind = ussp(&["adelic", &example("dvr.json")]);
    assert_eq!(wrong_kind.status.code(), Some(1));
    let bad_flag = ussp(&["pages", "--window", "1"]);
    assert_eq!(bad_flag.status.code(), Some(1));
}

#[test]
fn adelic_rejects_surfaces() {
    let doc = r#"{"kind":"sheaf",
        "model":{"points":[{"id":"g","codim":0},{"id":"c","codim":1},{"id":"p","codim":2}],"specializations":[["c","g"],["p","c"]]},
        "sheaf":{"group":{"stalks":{"g":{"cyclic":2},"c":"trivial","p":"trivial"},
            "restrictions":[{"from":"c","to":"g","map":[0]},{"from":"p","to":"c","map":[0]}]}}}"#;
    assert_eq!(ussp_stdin(&["validate", "-"], doc).status.code(), Some(0));
    let out = ussp_stdin(&["adelic", "-"], doc);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("dimension 2"));
}

#[test]
fn schema_errors_name_the_offending_field() {
    let doc = r#"{"kind":"model","model":{"points":[{"id":"x","codim":0}],"specializations":[["x","y"]]}}"#;
    let out = ussp_stdin(&["validate", "-"], doc);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/model/specializations/0/1"), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn generated_instances_round_trip_through_the_cli() {
    for kind in ["tower", "model", "ab-sheaf", "group-sheaf", "em-theory"] {
        let gen = ussp(&["generate", kind, "--seed", "3"]);
        assert_eq!(gen.status.code(), Some(0));
        let out = ussp_stdin(&["validate", "-"], &String::from_utf8(gen.stdout).unwrap());
        assert_eq!(out.status.code(), Some(0), "{kind}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn timing_is_opt_in() {
    let plain = String::from_utf8(ussp(&["validate", &example("dvr.json")]).stdout).unwrap();
    assert!(!plain.contains("elapsed"));
    let timed = String::from_utf8(ussp(&["--timing", "validate", &example("dvr.json")]).stdout).unwrap();
    assert!(timed.contains("elapsed:"));
}
