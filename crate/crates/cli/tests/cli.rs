use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const N1: &str = "gram:12,15,135,5,0,0";
const M1: &str = "1,20,80,0,0,0";

fn ternary(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ternary"))
        .args(args)
        .env("TERNARY_CACHE_DIR", cache)
        .output()
        .expect("binary runs")
}

fn schema(name: &str) -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("schemas")
        .join(format!("{name}.schema.json"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).unwrap()
}

/// Runs with `--format json`, checks the exit code and validates against the schema.
fn json(cache: &Path, schema_name: &str, args: &[&str], code: i32) -> Value {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let out = ternary(cache, &full);
    assert_eq!(
        out.status.code(),
        Some(code),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    let v = schema(schema_name);
    let errors: Vec<String> = v
        .iter_errors(&doc)
        .map(|e| format!("{} at {}", e, e.instance_path))
        .collect();
    assert!(
        errors.is_empty(),
        "{args:?} violates {schema_name}: {errors:?}"
    );
    doc
}

#[test]
fn spinor_partition_of_n1() {
    let dir = tempfile::tempdir().unwrap();
    let doc = json(dir.path(), "spinor", &["spinor", N1], 0);
    let p = &doc["payload"];
    assert_eq!(p["count"], 12);
    assert_eq!(p["g"], 2);
    let sizes: Vec<usize> = p["parts"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_array().unwrap().len())
        .collect();
    assert_eq!(sizes, vec![6, 6]);
}

#[test]
fn counterexample_does_not_respect() {
    let dir = tempfile::tempdir().unwrap();
    let doc = json(
        dir.path(),
        "corr-analyze",
        &["corr-analyze", N1, M1, "15"],
        0,
    );
    let p = &doc["payload"];
    assert_eq!(p["respects"], false);
    assert_eq!(p["shape_matches"], true);
    assert_eq!(p["g_NM"], 1);
    assert_eq!(p["L_NM"], serde_json::json!([3, 27, 60, 0, 0, -2]));
    let dm = json(
        dir.path(),
        "corr-analyze",
        &["corr-analyze", N1, M1, "15", "--convention", "dM"],
        0,
    );
    assert_eq!(dm["payload"]["shape_matches"], false);
    assert_eq!(dm["command"]["convention"], "dM");
}

#[test]
fn discriminant() {
    let dir = tempfile::tempdir().unwrap();
    let out = ternary(dir.path(), &["disc", M1]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "1600\n");
    let doc = json(dir.path(), "disc", &["disc", "1,1,1,1,1,1"], 0);
    assert_eq!(doc["payload"]["d"], "1/2");
    assert_eq!(doc["payload"]["four_d"], 2);
}

#[test]
fn every_command_validates() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let cases: [(&str, &[&str]); 16] = [
        ("reduce", &["reduce", "5,3,1,1,1,1"]),
        ("isom", &["isom", M1, "4,20,5,0,0,0"]),
        ("aut", &["aut", "1,1,1,0,0,0"]),
        ("disc", &["disc", N1]),
        ("genus-enum", &["genus-enum", M1]),
        ("spinor", &["spinor", M1]),
        ("watson-lambda", &["watson-lambda", M1, "2"]),
        ("watson-gamma", &["watson-gamma", "1,1,80,0,0,0", "5"]),
        ("watson-graph", &["watson-graph", "1,1,16,0,0,0", "5", "0"]),
        ("corr-pairs", &["corr-pairs", N1, M1, "15"]),
        ("corr-graph", &["corr-graph", N1, M1, "15"]),
        ("corr-split", &["corr-split", N1, M1, "15"]),
        (
            "corr-analyze",
            &["corr-analyze", "1,1,80,0,0,0", "1,1,16,0,0,0", "5"],
        ),
        ("corr-match", &["corr-match", N1, M1, "15"]),
        ("represents", &["represents", M1, "21"]),
        (
            "exceptional",
            &["exceptional", "1,1,80,0,0,0", "1,1,16,0,0,0", "5", "1"],
        ),
    ];
    for (name, args) in cases {
        let doc = json(d, name, args, 0);
        assert_eq!(doc["command"]["name"], name);
    }
    let doc = json(d, "watson-lambda", &["watson-lambda", M1, "2"], 0);
    assert_eq!(doc["payload"]["fiber_exponent"], 1);
    assert!(doc["payload"]["table_row"].is_object());
    let doc = json(
        d,
        "exceptional",
        &["exceptional", "1,1,80,0,0,0", "1,1,16,0,0,0", "5", "1"],
        0,
    );
    assert_eq!(doc["payload"]["transferred"], serde_json::json!([5]));
}

#[test]
fn domain_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let doc = json(dir.path(), "error", &["disc", "1,1,0,0,0,0"], 1);
    assert_eq!(doc["error"]["kind"], "NotPositiveDefinite");
    let doc = json(
        dir.path(),
        "error",
        &["watson-gamma", "1,1,1,0,0,0", "3"],
        1,
    );
    assert_eq!(doc["error"]["kind"], "NotHyperbolicAtP");
    let doc = json(dir.path(), "error", &["corr-graph", N1, M1, "4"], 1);
    assert_eq!(doc["error"]["kind"], "NotSquareFree");
    let doc = json(dir.path(), "error", &["reduce", "1,2,x,0,0,0"], 1);
    assert_eq!(doc["error"]["kind"], "ParseError");
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["disc"][..],
        &["frobnicate", M1],
        &["disc", M1, "--bogus"],
        &["disc", M1, "--format", "dot"],
        &["watson-lambda", M1, "two"],
        &["corr-analyze", N1, M1, "15", "--convention", "dQ"],
    ] {
        assert_eq!(ternary(dir.path(), args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn output_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["corr-graph", N1, M1, "15", "--format", "json"];
    let first = ternary(dir.path(), &args).stdout;
    let cached = ternary(dir.path(), &args).stdout;
    let mut fresh_args = args.to_vec();
    fresh_args.push("--no-cache");
    let fresh = ternary(dir.path(), &fresh_args).stdout;
    assert_eq!(first, cached);
    let strip = |b: &[u8]| -> Value {
        let mut v: Value = serde_json::from_slice(b).unwrap();
        v["command"]["args"] = Value::Null;
        v
    };
    assert_eq!(strip(&first), strip(&fresh));
}

#[test]
fn dot_for_graphs() {
    let dir = tempfile::tempdir().unwrap();
    let out = ternary(dir.path(), &["corr-graph", N1, M1, "15", "--format", "dot"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("graph correspondence_n15 {"));
    assert_eq!(text.matches(" -- ").count(), 4);
    let out = ternary(
        dir.path(),
        &["watson-graph", "1,1,16,0,0,0", "5", "0", "--format", "dot"],
    );
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("graph"));
}

#[test]
fn reduced_output_parses_back() {
    let dir = tempfile::tempdir().unwrap();
    for f in ["5,3,1,1,1,1", N1, "gram:4,20,25,5,0,0", "7,7,7,-3,2,1"] {
        let r = String::from_utf8(ternary(dir.path(), &["reduce", f]).stdout).unwrap();
        let again = String::from_utf8(ternary(dir.path(), &["reduce", r.trim()]).stdout).unwrap();
        assert_eq!(r, again);
        let same = String::from_utf8(ternary(dir.path(), &["isom", f, r.trim()]).stdout).unwrap();
        assert!(same.starts_with("isometric"));
    }
}

#[test]
fn cache_files_are_written_and_checked() {
    let dir = tempfile::tempdir().unwrap();
    let expect = String::from_utf8(ternary(dir.path(), &["spinor", M1]).stdout).unwrap();
    let files: Vec<_> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    assert_eq!(files.len(), 1);
    let name = files[0].file_stem().unwrap().to_str().unwrap().to_string();
    assert_eq!(name.len(), 64);
    assert!(name.chars().all(|c| c.is_ascii_hexdigit()));
    std::fs::write(&files[0], "{ not json").unwrap();
    let again = String::from_utf8(ternary(dir.path(), &["spinor", M1]).stdout).unwrap();
    assert_eq!(expect, again);
    let no_cache = tempfile::tempdir().unwrap();
    ternary(no_cache.path(), &["spinor", M1, "--no-cache"]);
    assert_eq!(std::fs::read_dir(no_cache.path()).unwrap().count(), 0);
}
