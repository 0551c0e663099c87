//! End-to-end tests for the `wpvol` binary: golden stdout lines, exit
//! codes, configuration layering, cache behavior, and conformance of the
//! JSON report output to the shipped schema.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use wpvol_asymptotics::{p_poly, ratio_fn};
use wpvol_correlator::TauVector;

/// A command for the built binary, scrubbed of ambient configuration.
fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_wpvol"));
    cmd.env_remove("WPVOL_CACHE");
    cmd.env_remove("WPVOL_THREADS");
    cmd.env_remove("WPVOL_DIGITS");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("stdout is utf8")
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("stderr is utf8")
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("exit code")
}

/// Fresh per-test scratch directory.
fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("wpvol-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).expect("scratch dir");
    dir
}

#[test]
fn correlator_prints_exact_rationals() {
    let one_point = run(&["correlator", "--g", "1", "--d", "1"]);
    assert_eq!(code(&one_point), 0);
    assert_eq!(stdout(&one_point), "1/24\n");
    assert_eq!(stderr(&one_point), "");

    let sphere = run(&["correlator", "--g", "0", "--d", "0,0,0"]);
    assert_eq!(code(&sphere), 0);
    assert_eq!(stdout(&sphere), "1\n");

    let genus_two = run(&["correlator", "--g", "2", "--d", "4"]);
    assert_eq!(code(&genus_two), 0);
    assert_eq!(stdout(&genus_two), "1/1152\n");
}

#[test]
fn correlator_notes_vanishing_on_stderr() {
    let gated = run(&["correlator", "--g", "1", "--d", "0,0"]);
    assert_eq!(code(&gated), 0);
    assert_eq!(stdout(&gated), "0\n");
    assert!(stderr(&gated).contains("dimension mismatch"), "{}", stderr(&gated));

    let unstable = run(&["correlator", "--g", "0", "--d", "0"]);
    assert_eq!(code(&unstable), 0);
    assert_eq!(stdout(&unstable), "0\n");
    assert!(stderr(&unstable).contains("unstable"), "{}", stderr(&unstable));
}

#[test]
fn bracket_cross_checks_both_routes() {
    let both = run(&["bracket", "--g", "2", "--d", "0", "--route", "both"]);
    assert_eq!(code(&both), 0);
    assert_eq!(stdout(&both), "29/192*pi^8\nmatch\n");
}

#[test]
fn bracket_routes_and_padding() {
    let top = run(&["bracket", "--g", "3", "--d", "7"]);
    assert_eq!(code(&top), 0);
    assert_eq!(stdout(&top), "400400\n");

    let padded = run(&["bracket", "--g", "0", "--d", "1", "--n", "4"]);
    assert_eq!(code(&padded), 0);
    assert_eq!(stdout(&padded), "12\n");

    let recursive = run(&["bracket", "--g", "1", "--d", "1", "--route", "rec"]);
    assert_eq!(code(&recursive), 0);
    assert_eq!(stdout(&recursive), "1/2\n");

    let closed = run(&["bracket", "--g", "2", "--n", "0"]);
    assert_eq!(code(&closed), 0);
    assert_eq!(stdout(&closed), "43/2160*pi^6\n");
}

#[test]
fn bracket_rejects_inadmissible_input() {
    let unstable = run(&["bracket", "--g", "0", "--d", "5"]);
    assert_eq!(code(&unstable), 2);
    assert!(stderr(&unstable).contains("no stable surface"), "{}", stderr(&unstable));

    let excess = run(&["bracket", "--g", "1", "--d", "9"]);
    assert_eq!(code(&excess), 2);
    assert!(stderr(&excess).contains("exceeds"), "{}", stderr(&excess));

    let closed_rec = run(&["bracket", "--g", "2", "--n", "0", "--route", "rec"]);
    assert_eq!(code(&closed_rec), 2);
    assert!(stderr(&closed_rec).contains("boundary"), "{}", stderr(&closed_rec));

    let short_pad = run(&["bracket", "--g", "2", "--d", "1,1", "--n", "1"]);
    assert_eq!(code(&short_pad), 2);
    assert!(stderr(&short_pad).contains("smaller"), "{}", stderr(&short_pad));
}

const V12_EXPORT: &str = "# wpvol volume-poly v1\n# g=1 n=2\n0,0: 1/4*pi^4\n1,0: 1/3*pi^2\n1,1: 1/6\n2,0: 1/12\n";

#[test]
fn volume_poly_exports_canonical_lines() {
    let exported = run(&["volume-poly", "--g", "1", "--n", "2"]);
    assert_eq!(code(&exported), 0);
    assert_eq!(stdout(&exported), V12_EXPORT);
}

#[test]
fn volume_poly_writes_the_out_file() {
    let dir = scratch("vol-out");
    let path = dir.join("v12.txt");
    let path_text = path.to_str().expect("utf8 path");
    let written = run(&["volume-poly", "--g", "1", "--n", "2", "--out", path_text]);
    assert_eq!(code(&written), 0);
    assert_eq!(stdout(&written), "");
    assert_eq!(std::fs::read_to_string(&path).expect("out file"), V12_EXPORT);
}

#[test]
fn eval_exact_and_rounded() {
    let exact = run(&["eval", "--g", "1", "--n", "1", "--lengths", "2"]);
    assert_eq!(code(&exact), 0);
    assert_eq!(stdout(&exact), "1/12*pi^2 + 1/12\n");

    let rounded = run(&["eval", "--g", "1", "--n", "1", "--lengths", "2", "--digits", "6"]);
    assert_eq!(code(&rounded), 0);
    assert_eq!(stdout(&rounded), "0.905800\n");

    let origin = run(&["eval", "--g", "1", "--n", "1", "--lengths", "0", "--digits", "6"]);
    assert_eq!(code(&origin), 0);
    assert_eq!(stdout(&origin), "0.822467\n");

    let fractional = run(&["eval", "--g", "0", "--n", "4", "--lengths", "1/2,0,0,0"]);
    assert_eq!(code(&fractional), 0);
    assert_eq!(stdout(&fractional), "2*pi^2 + 1/8\n");
}

#[test]
fn eval_flags_are_validated() {
    let arity = run(&["eval", "--g", "1", "--n", "2", "--lengths", "2"]);
    assert_eq!(code(&arity), 2);
    assert!(stderr(&arity).contains("expected 2 boundary lengths"), "{}", stderr(&arity));

    let zero_digits = run(&["eval", "--g", "1", "--n", "1", "--lengths", "2", "--digits", "0"]);
    assert_eq!(code(&zero_digits), 2);
    assert!(stderr(&zero_digits).contains("1..=1000"), "{}", stderr(&zero_digits));

    let bad_length = run(&["eval", "--g", "1", "--n", "1", "--lengths", "x"]);
    assert_eq!(code(&bad_length), 2);
}

#[test]
fn eval_digit_budget_layers_file_env_flag() {
    let dir = scratch("digit-cfg");
    let cfg = dir.join("wpvol.toml");
    std::fs::write(&cfg, "precision_digits = 2\n").expect("config written");
    let cfg_text = cfg.to_str().expect("utf8 path");

    let from_file = run(&["eval", "--g", "1", "--n", "1", "--lengths", "2", "--config", cfg_text, "--digits"]);
    assert_eq!(code(&from_file), 0);
    assert_eq!(stdout(&from_file), "0.91\n");

    let mut env_wins = bin();
    env_wins
        .args(["eval", "--g", "1", "--n", "1", "--lengths", "2", "--config", cfg_text, "--digits"])
        .env("WPVOL_DIGITS", "3");
    let env_wins = env_wins.output().expect("binary runs");
    assert_eq!(code(&env_wins), 0);
    assert_eq!(stdout(&env_wins), "0.906\n");

    let mut flag_wins = bin();
    flag_wins
        .args(["eval", "--g", "1", "--n", "1", "--lengths", "2", "--config", cfg_text, "--digits", "6"])
        .env("WPVOL_DIGITS", "3");
    let flag_wins = flag_wins.output().expect("binary runs");
    assert_eq!(code(&flag_wins), 0);
    assert_eq!(stdout(&flag_wins), "0.905800\n");
}

#[test]
fn q_table_prints_the_diagnostic_cells() {
    let tsv = run(&["q-table", "--k-max", "1", "--g-list", "20,40"]);
    assert_eq!(code(&tsv), 0);
    assert_eq!(stdout(&tsv), "k\tg\tQ\n1\t20\t1.000438\n1\t40\t1.000106\n");

    let csv = run(&["q-table", "--k-max", "1", "--g-list", "20", "--format", "csv"]);
    assert_eq!(code(&csv), 0);
    assert_eq!(stdout(&csv), "k,g,Q\n1,20,1.000438\n");

    let header_only = run(&["q-table", "--k-max", "0", "--g-list", "20"]);
    assert_eq!(code(&header_only), 0);
    assert_eq!(stdout(&header_only), "k\tg\tQ\n");

    let bad_genus = run(&["q-table", "--k-max", "1", "--g-list", "0"]);
    assert_eq!(code(&bad_genus), 2);
}

#[test]
fn ratio_fn_prints_canonical_closed_forms() {
    let first = run(&["ratio-fn", "--k", "1"]);
    assert_eq!(code(&first), 0);
    assert_eq!(stdout(&first), "(12g^2-12g+5)/(12g^2-6g)\n");

    let second = run(&["ratio-fn", "--k", "2"]);
    assert_eq!(code(&second), 0);
    assert_eq!(stdout(&second), format!("{}\n", ratio_fn(2).func));

    let zero = run(&["ratio-fn", "--k", "0"]);
    assert_eq!(code(&zero), 2);
}

#[test]
fn p_poly_prints_integer_polynomials() {
    let quadratic = run(&["p-poly", "--d", "2"]);
    assert_eq!(code(&quadratic), 0);
    assert_eq!(stdout(&quadratic), "36g^2-36g+15\n");

    let mixed = run(&["p-poly", "--d", "3,1"]);
    assert_eq!(code(&mixed), 0);
    assert_eq!(stdout(&mixed), format!("{}\n", p_poly(&TauVector::new(vec![3, 1])).poly));

    let empty = run(&["p-poly"]);
    assert_eq!(code(&empty), 0);
    assert_eq!(stdout(&empty), format!("{}\n", p_poly(&TauVector::empty()).poly));
}

#[test]
fn verify_text_report_passes_with_exit_zero() {
    let report = run(&["verify", "--suite", "a-sequence", "--l-max", "6"]);
    assert_eq!(code(&report), 0);
    let text = stdout(&report);
    assert!(text.starts_with("suite: a_sequence\nparams: l_max=6\n"), "{text}");
    assert!(text.ends_with("result: PASS\n"), "{text}");
}

#[test]
fn verify_threads_do_not_change_output() {
    let single = run(&["verify", "--suite", "tau1-bound", "--max-complexity", "5", "--threads", "1"]);
    let triple = run(&["verify", "--suite", "tau1-bound", "--max-complexity", "5", "--threads", "3"]);
    assert_eq!(code(&single), 0);
    assert_eq!(code(&triple), 0);
    assert_eq!(stdout(&single), stdout(&triple));

    let zero = run(&["verify", "--suite", "tau1-bound", "--threads", "0"]);
    assert_eq!(code(&zero), 2);
}

/// Minimal JSON Schema checker covering exactly the subset the shipped
/// schema uses: type, required, properties, additionalProperties false,
/// items, local $ref, oneOf, const, and minimum.
mod schema {
    use serde_json::Value;

    pub fn validate(
        root: &Value,
        schema: &Value,
        instance: &Value,
        path: &str,
    ) -> Result<(), String> {
        let schema = deref(root, schema);
        if let Some(expected) = schema.get("const") {
            return if instance == expected {
                Ok(())
            } else {
                Err(format!("{path}: expected const {expected}"))
            };
        }
        if let Some(options) = schema.get("oneOf").and_then(Value::as_array) {
            let hits = options
                .iter()
                .filter(|option| validate(root, option, instance, path).is_ok())
                .count();
            return if hits == 1 {
                Ok(())
            } else {
                Err(format!("{path}: {hits} oneOf branches matched"))
            };
        }
        if let Some(kind) = schema.get("type") {
            check_type(kind, instance, path)?;
        }
        if let Some(minimum) = schema.get("minimum").and_then(Value::as_i64) {
            if instance.as_i64().is_some_and(|v| v < minimum) {
                return Err(format!("{path}: below minimum {minimum}"));
            }
        }
        if let Some(required) = schema.get("required").and_then(Value::as_array) {
            for key in required {
                let key = key.as_str().expect("required entries are strings");
                if instance.get(key).is_none() {
                    return Err(format!("{path}: missing required property {key:?}"));
                }
            }
        }
        if let Some(properties) = schema.get("properties").and_then(Value::as_object) {
            if let Some(object) = instance.as_object() {
                if schema.get("additionalProperties") == Some(&Value::Bool(false)) {
                    for key in object.keys() {
                        if !properties.contains_key(key) {
                            return Err(format!("{path}: unexpected property {key:?}"));
                        }
                    }
                }
                for (key, sub) in properties {
                    if let Some(value) = object.get(key) {
                        validate(root, sub, value, &format!("{path}.{key}"))?;
                    }
                }
            }
        }
        if let Some(items) = schema.get("items") {
            if let Some(array) = instance.as_array() {
                for (index, element) in array.iter().enumerate() {
                    validate(root, items, element, &format!("{path}[{index}]"))?;
                }
            }
        }
        Ok(())
    }

    fn deref<'a>(root: &'a Value, schema: &'a Value) -> &'a Value {
        if let Some(reference) = schema.get("$ref").and_then(Value::as_str) {
            let name = reference
                .strip_prefix("#/definitions/")
                .expect("local definitions ref");
            return &root["definitions"][name];
        }
        schema
    }

    fn check_type(kind: &Value, instance: &Value, path: &str) -> Result<(), String> {
        let allowed: Vec<&str> = match kind {
            Value::String(s) => vec![s.as_str()],
            Value::Array(list) => list.iter().filter_map(Value::as_str).collect(),
            _ => return Err(format!("{path}: malformed type keyword")),
        };
        let actual = match instance {
            Value::Null => "null",
            Value::Bool(_) => "boolean",
            Value::Number(n) if n.is_i64() || n.is_u64() => "integer",
            Value::Number(_) => "number",
            Value::String(_) => "string",
            Value::Array(_) => "array",
            Value::Object(_) => "object",
        };
        if allowed.contains(&actual) || (actual == "integer" && allowed.contains(&"number")) {
            Ok(())
        } else {
            Err(format!("{path}: type {actual} not in {allowed:?}"))
        }
    }
}

fn load_schema() -> serde_json::Value {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/verify-report.schema.json");
    let text = std::fs::read_to_string(path).expect("schema file");
    serde_json::from_str(&text).expect("schema parses")
}

#[test]
fn verify_json_matches_the_shipped_schema() {
    let report = run(&["verify", "--suite", "tau1-bound", "--max-complexity", "4", "--format", "json"]);
    assert_eq!(code(&report), 0);
    let instance: serde_json::Value =
        serde_json::from_str(&stdout(&report)).expect("output is JSON");
    let schema = load_schema();
    schema::validate(&schema, &schema, &instance, "$").expect("report conforms");
    assert_eq!(instance["suite"], "tau1_bound");
    assert!(instance["cases"].as_array().is_some_and(|cases| !cases.is_empty()));
}

#[test]
fn verify_all_emits_one_conforming_report_per_suite() {
    let all = run(&[
        "verify", "--suite", "all", "--max-complexity", "3", "--l-max", "3", "--g-max", "4",
        "--format", "json",
    ]);
    assert_eq!(code(&all), 0);
    let instance: serde_json::Value = serde_json::from_str(&stdout(&all)).expect("output is JSON");
    let reports = instance.as_array().expect("array of reports");
    assert_eq!(reports.len(), 8);
    let schema = load_schema();
    for (index, report) in reports.iter().enumerate() {
        schema::validate(&schema, &schema, report, &format!("$[{index}]")).expect("report conforms");
    }
    let names: Vec<&str> = reports.iter().map(|r| r["suite"].as_str().unwrap()).collect();
    assert_eq!(
        names,
        [
            "monotonicity",
            "domination",
            "tau1_bound",
            "sandwich",
            "identities",
            "kdv",
            "a_sequence",
            "ratio_trends"
        ]
    );
}

#[test]
fn cache_round_trip_preserves_output_and_files() {
    let dir = scratch("cache-round-trip");
    let path = dir.join("cache.txt");
    let path_text = path.to_str().expect("utf8 path");

    let absent = run(&["cache", "stats", "--cache", path_text]);
    assert_eq!(code(&absent), 0);
    assert_eq!(
        stdout(&absent),
        format!("file: {path_text}\npresent: no\nentries: 0\n")
    );

    let cold = run(&["correlator", "--g", "2", "--d", "4", "--cache", path_text]);
    assert_eq!(code(&cold), 0);
    assert_eq!(stdout(&cold), "1/1152\n");
    let contents = std::fs::read_to_string(&path).expect("cache written");
    assert!(contents.starts_with("# wpvol correlator cache v1\n"), "{contents}");
    assert!(contents.lines().any(|line| line.starts_with("2;4;")), "{contents}");

    let warm = run(&["correlator", "--g", "2", "--d", "4", "--cache", path_text]);
    assert_eq!(code(&warm), 0);
    assert_eq!(stdout(&warm), stdout(&cold));

    let stats = run(&["cache", "stats", "--cache", path_text]);
    assert_eq!(code(&stats), 0);
    let stats_text = stdout(&stats);
    assert!(stats_text.contains("present: yes"), "{stats_text}");
    let entries: usize = stats_text
        .lines()
        .find_map(|line| line.strip_prefix("entries: "))
        .expect("entries line")
        .parse()
        .expect("entry count");
    assert!(entries >= 2, "expected the seed and the new value, found {entries}");

    let exported = run(&["cache", "export", "--cache", path_text]);
    assert_eq!(code(&exported), 0);
    assert_eq!(stdout(&exported), std::fs::read_to_string(&path).expect("cache readable"));

    let cleared = run(&["cache", "clear", "--cache", path_text]);
    assert_eq!(code(&cleared), 0);
    assert_eq!(stdout(&cleared), format!("cleared: {path_text}\n"));
    assert!(!path.exists());

    let nothing = run(&["cache", "clear", "--cache", path_text]);
    assert_eq!(code(&nothing), 0);
    assert_eq!(stdout(&nothing), format!("nothing to clear: {path_text}\n"));
}

#[test]
fn cache_env_var_configures_the_path() {
    let dir = scratch("cache-env");
    let path = dir.join("env-cache.txt");
    let mut cmd = bin();
    cmd.args(["correlator", "--g", "1", "--d", "1"])
        .env("WPVOL_CACHE", path.to_str().expect("utf8 path"));
    let output = cmd.output().expect("binary runs");
    assert_eq!(code(&output), 0);
    assert_eq!(stdout(&output), "1/24\n");
    assert!(path.exists(), "cache file should be created via WPVOL_CACHE");
}

#[test]
fn cache_errors_are_reported() {
    let dir = scratch("cache-errors");
    let path = dir.join("corrupt.txt");
    std::fs::write(&path, "# some other file\n1;1;1/24\n").expect("corrupt file written");
    let path_text = path.to_str().expect("utf8 path");

    let corrupt = run(&["correlator", "--g", "1", "--d", "1", "--cache", path_text]);
    assert_eq!(code(&corrupt), 2);
    assert!(stderr(&corrupt).contains("cache"), "{}", stderr(&corrupt));

    let unconfigured = run(&["cache", "stats"]);
    assert_eq!(code(&unconfigured), 2);
    assert!(stderr(&unconfigured).contains("no cache path"), "{}", stderr(&unconfigured));

    let missing = dir.join("missing.txt");
    let missing_export = run(&["cache", "export", "--cache", missing.to_str().expect("utf8 path")]);
    assert_eq!(code(&missing_export), 2);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&run(&["correlator"])), 2);
    assert_eq!(code(&run(&["bogus-subcommand"])), 2);
    assert_eq!(code(&run(&["q-table", "--k-max", "1"])), 2);
    assert_eq!(code(&run(&["verify", "--suite", "nonsense"])), 2);
}

#[test]
fn configuration_errors_exit_two() {
    let unreadable = run(&["correlator", "--g", "1", "--d", "1", "--config", "/nonexistent/wpvol.toml"]);
    assert_eq!(code(&unreadable), 2);
    assert!(stderr(&unreadable).contains("cannot read config file"), "{}", stderr(&unreadable));

    let dir = scratch("bad-config");
    let cfg = dir.join("bad.toml");
    std::fs::write(&cfg, "volume = 3\n").expect("config written");
    let unknown = run(&["correlator", "--g", "1", "--d", "1", "--config", cfg.to_str().expect("utf8 path")]);
    assert_eq!(code(&unknown), 2);
    assert!(stderr(&unknown).contains("unknown field"), "{}", stderr(&unknown));

    let mut oversized = bin();
    oversized.args(["correlator", "--g", "1", "--d", "1"]).env("WPVOL_DIGITS", "1001");
    let oversized = oversized.output().expect("binary runs");
    assert_eq!(code(&oversized), 2);
    assert!(stderr(&oversized).contains("1..=1000"), "{}", stderr(&oversized));
}
