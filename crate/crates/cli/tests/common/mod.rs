#![allow(dead_code)]

use std::path::Path;

use serde_json::Value;
use tenrank_core::syslang::QuadraticSystem;
use tenrank_oracle::OEq;

pub const EXAMPLE: &str = "eq u = x*y; eq y = x; eq u = 2;";

/// Runs the CLI in-process: (exit code, stdout, stderr).
pub fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = tenrank_cli::run(
        std::iter::once("tenrank").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

/// Runs with `--json` and parses the report.
pub fn cli_json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let (code, out, err) = cli(&full);
    let v = serde_json::from_str(&out).unwrap_or_else(|e| panic!("bad json ({e}): {out} / {err}"));
    (code, v)
}

pub fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

pub fn write_source(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

pub fn var_name(i: usize) -> String {
    format!("x{i}")
}

pub fn to_system(eqs: &[OEq]) -> QuadraticSystem {
    let names: Vec<Vec<String>> = eqs
        .iter()
        .map(|e| e.slots().into_iter().map(var_name).collect())
        .collect();
    let named: Vec<(&str, Vec<&str>, Option<i64>)> = eqs
        .iter()
        .zip(&names)
        .map(|(e, ns)| {
            (
                e.kind(),
                ns.iter().map(|s| s.as_str()).collect(),
                e.constant(),
            )
        })
        .collect();
    QuadraticSystem::from_named(&named).expect("valid system")
}
