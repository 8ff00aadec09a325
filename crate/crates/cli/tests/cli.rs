//! End-to-end runs of the `monohecke` binary: documented examples, exit codes,
//! determinism, schema conformance and cache behaviour.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use monohecke_cli::cache::{Cache, CacheKey, CACHE_VERSION};
use serde_json::{json, Value};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_monohecke"))
        .args(args)
        .env_remove("MONOHECKE_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let out = run(args);
    let doc = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout of {args:?} is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    });
    (out.status.code().unwrap(), doc)
}

fn schema(name: &str) -> jsonschema::JSONSchema {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(format!("{name}.schema.json"));
    let doc: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    jsonschema::JSONSchema::compile(&doc).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn assert_valid(name: &str, doc: &Value) {
    let compiled = schema(name);
    if let Err(errors) = compiled.validate(doc) {
        let msgs: Vec<String> = errors.map(|e| format!("{} at {}", e, e.instance_path)).collect();
        panic!("{name} output violates its schema: {msgs:?}");
    };
}

#[test]
fn sl2_level_eight_centre_counts() {
    let (code, doc) = run_json(&["centre", "--preset", "A1-SL2", "--n", "8", "--q", "3", "--s", "1", "--json"]);
    assert_eq!(code, 0);
    let mut by_case: Vec<(String, i64)> = doc["reports"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| (r["case"].as_str().unwrap().to_string(), r["simples"].as_i64().unwrap()))
        .collect();
    by_case.sort();
    assert_eq!(
        by_case,
        [("ii", 1), ("iii", 4), ("iv", 1), ("v", 1)].map(|(c, k)| (c.to_string(), k))
    );
    assert_valid("centre", &doc);
}

#[test]
fn sl2_level_eight_cells() {
    let out = run(&["cells", "--preset", "A1-SL2", "--n", "8"]);
    assert!(out.status.success());
    let (_, doc) = run_json(&["cells", "--preset", "A1-SL2", "--n", "8", "--json"]);
    let cells = doc["cells"].as_array().unwrap();
    // a = 0 and a = 1 on the regular block, one cell per singular block and
    // one per free orbit {λ, -λ}.
    assert_eq!(cells.len(), 6);
    let sizes: Vec<usize> = cells.iter().map(|c| c["members"].as_array().unwrap().len()).collect();
    assert_eq!(sizes.iter().filter(|&&s| s == 1).count(), 2);
    assert_eq!(sizes.iter().filter(|&&s| s == 4).count(), 3);
    assert_eq!(sizes.iter().filter(|&&s| s == 2).count(), 1);
}

#[test]
fn b2_q_properties_pass() {
    let out = run(&["check", "--preset", "B2", "--n", "1", "--suite", "q-properties"]);
    assert_eq!(out.status.code(), Some(0));
    let (code, doc) = run_json(&["check", "--preset", "B2", "--n", "1", "--suite", "q-properties", "--json"]);
    assert_eq!(code, 0);
    assert_eq!(doc["passed"], json!(true));
    let names: Vec<&str> = doc["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    for k in 1..=10 {
        assert!(names.contains(&format!("Q{k}").as_str()), "Q{k} missing");
    }
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["cells"]).status.code(), Some(2));
    assert_eq!(run(&["cells", "--preset", "A2", "--datum", "{}"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["cells", "--preset", "A2", "--n", "0"]).status.code(), Some(2));
    let (code, doc) = run_json(&["cells", "--preset", "Z9", "--json"]);
    assert_eq!(code, 2);
    assert_valid("error", &doc);
}

#[test]
fn precondition_failures_exit_one_with_error_object() {
    let (code, doc) = run_json(&["twist", "--preset", "A1-SL2", "--n", "8", "--q", "2", "--json"]);
    assert_eq!(code, 1);
    assert_valid("error", &doc);
    assert!(!doc["error"]["message"].as_str().unwrap().is_empty());

    let (code, doc) = run_json(&["cells", "--preset", "A2", "--n", "6", "--guard", "3", "--json"]);
    assert_eq!(code, 1);
    assert_valid("error", &doc);

    let out = run(&["twist", "--preset", "A1-SL2", "--n", "8", "--q", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}

fn subcommand_runs() -> Vec<(&'static str, Vec<&'static str>)> {
    vec![
        ("weyl-list", vec!["weyl", "list", "--preset", "G2"]),
        ("block", vec!["block", "--preset", "B2", "--n", "2", "--lambda", "1,0"]),
        ("canonical", vec!["canonical", "--preset", "A2", "--n", "2"]),
        ("cells", vec!["cells", "--preset", "B2", "--n", "2"]),
        ("jring", vec!["jring", "--preset", "A1-SL2", "--n", "4", "--lambda", "1"]),
        ("twist", vec!["twist", "--preset", "A2", "--n", "2", "--pi", "2,1"]),
        ("centre", vec!["centre", "--preset", "A2", "--n", "1"]),
        ("check", vec!["check", "--preset", "A2", "--n", "2", "--suite", "all"]),
    ]
}

#[test]
fn every_subcommand_matches_its_schema() {
    for (name, mut args) in subcommand_runs() {
        args.push("--json");
        let (code, doc) = run_json(&args);
        assert_eq!(code, 0, "{name}");
        assert_valid(name, &doc);
    }
}

#[test]
fn output_is_deterministic() {
    for (name, mut args) in subcommand_runs() {
        args.push("--json");
        let a = run(&args).stdout;
        let b = run(&args).stdout;
        assert_eq!(a, b, "{name} JSON differs between runs");
    }
    let a = run(&["centre", "--preset", "A1-SL2", "--n", "8", "--q", "3", "--s", "1"]).stdout;
    let b = run(&["centre", "--preset", "A1-SL2", "--n", "8", "--q", "3", "--s", "1"]).stdout;
    assert_eq!(a, b);
}

#[test]
fn seed_order_relabels_generators() {
    let (_, plain) = run_json(&["weyl", "list", "--preset", "B2", "--json"]);
    let (_, swapped) = run_json(&["weyl", "list", "--preset", "B2", "--seed-order", "2,1", "--json"]);
    assert_eq!(plain["order"], swapped["order"]);
    assert_ne!(plain["datum"]["cartan"], swapped["datum"]["cartan"]);
    assert_eq!(run(&["weyl", "list", "--preset", "B2", "--seed-order", "1,1"]).status.code(), Some(2));
}

#[test]
fn datum_can_be_given_inline() {
    let datum = r#"{"rank":1,"simple_roots":[[2]],"simple_coroots":[[1]]}"#;
    let (code, doc) = run_json(&["weyl", "list", "--datum", datum, "--json"]);
    assert_eq!(code, 0);
    assert_eq!(doc["order"], json!(2));
}

#[test]
fn cache_put_then_get_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Cache::new(dir.path());
    let key = CacheKey::new("fp", 4, "h", &json!([[1]]));
    assert_eq!(cache.get(&key), None);
    let payload = json!({"rows": [[1, 2], [3, 4]], "label": "x"});
    cache.put(&key, &payload).unwrap();
    let back = cache.get(&key).unwrap();
    assert_eq!(serde_json::to_vec(&back).unwrap(), serde_json::to_vec(&payload).unwrap());
    assert_eq!(cache.get(&CacheKey::new("fp", 4, "h", &json!([[2]]))), None);
}

#[test]
fn cache_version_bump_misses() {
    let dir = tempfile::tempdir().unwrap();
    let key = CacheKey::new("fp", 2, "h", &json!(0));
    Cache::new(dir.path()).put(&key, &json!(1)).unwrap();
    let bumped = Cache::with_version(dir.path(), &format!("{CACHE_VERSION}+1"));
    assert_eq!(bumped.get(&key), None);

    // Even a file at the same path with a foreign version is ignored.
    let path = Cache::new(dir.path()).path(&key);
    let mut entry: Value = serde_json::from_slice(&fs::read(&path).unwrap()).unwrap();
    entry["version"] = json!("monohecke-cache-0");
    fs::write(&path, entry.to_string()).unwrap();
    assert_eq!(Cache::new(dir.path()).get(&key), None);
}

#[test]
fn cache_creates_missing_directory() {
    let dir = tempfile::tempdir().unwrap();
    let nested = dir.path().join("a").join("b");
    let cache = Cache::new(&nested);
    let key = CacheKey::new("fp", 1, "h", &json!(null));
    cache.put(&key, &json!("v")).unwrap();
    assert!(nested.is_dir());
    assert_eq!(cache.get(&key), Some(json!("v")));
}

fn entries(dir: &Path) -> Vec<std::path::PathBuf> {
    let mut v: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    v.sort();
    v
}

#[test]
fn cached_runs_match_uncached_output() {
    let dir = tempfile::tempdir().unwrap();
    let cache_dir = dir.path().join("cache");
    let cd = cache_dir.to_str().unwrap();
    let base = ["centre", "--preset", "B2", "--n", "2", "--json"];
    let plain = run(&base).stdout;

    let with_cache: Vec<&str> = base.iter().copied().chain(["--cache-dir", cd]).collect();
    let cold = run(&with_cache);
    assert!(cold.status.success());
    assert_eq!(cold.stdout, plain);
    let files = entries(&cache_dir);
    assert!(!files.is_empty());
    let stored: Vec<Vec<u8>> = files.iter().map(|p| fs::read(p).unwrap()).collect();

    let warm = run(&with_cache);
    assert_eq!(warm.stdout, plain);
    assert_eq!(files.iter().map(|p| fs::read(p).unwrap()).collect::<Vec<_>>(), stored);

    let via_env = Command::new(env!("CARGO_BIN_EXE_monohecke"))
        .args(base)
        .env("MONOHECKE_CACHE_DIR", cd)
        .output()
        .unwrap();
    assert_eq!(via_env.stdout, plain);
}

#[test]
fn corrupt_cache_entry_is_recomputed_and_overwritten() {
    let dir = tempfile::tempdir().unwrap();
    let cd = dir.path().to_str().unwrap();
    let args = ["cells", "--preset", "A2", "--n", "2", "--json", "--cache-dir", cd];
    let first = run(&args);
    let files = entries(dir.path());
    let good: Vec<Vec<u8>> = files.iter().map(|p| fs::read(p).unwrap()).collect();
    for p in &files {
        fs::write(p, b"{ not json").unwrap();
    }
    let second = run(&args);
    assert!(second.status.success());
    assert_eq!(second.stdout, first.stdout);
    assert!(String::from_utf8_lossy(&second.stderr).contains("corrupt cache entry"));
    assert_eq!(files.iter().map(|p| fs::read(p).unwrap()).collect::<Vec<_>>(), good);
}
