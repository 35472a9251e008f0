#![allow(dead_code)]

use std::path::{Path, PathBuf};

use serde_json::Value;

pub fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn data(name: &str) -> PathBuf {
    crate_dir().join("data").join(name)
}

fn load(path: &Path) -> Value {
    let text = std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    serde_json::from_str(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// Panics with every validation error if `instance` does not match the schema.
pub fn assert_schema(schema: &str, instance: &Value) {
    let schema = load(&crate_dir().join("schemas").join(format!("{schema}.schema.json")));
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    let errors: Vec<String> = validator.iter_errors(instance).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{instance}\n{}", errors.join("\n"));
}

pub fn schema_rejects(schema: &str, instance: &Value) -> bool {
    let schema = load(&crate_dir().join("schemas").join(format!("{schema}.schema.json")));
    !jsonschema::validator_for(&schema)
        .expect("schema compiles")
        .is_valid(instance)
}

pub fn read_json(path: &Path) -> Value {
    load(path)
}
