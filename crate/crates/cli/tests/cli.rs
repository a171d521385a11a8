mod common;

use serde_json::Value;
use tempfile::tempdir;

use common::{cli, cli_json, path_str, write_source, EXAMPLE};
use tenrank_core::fields::FieldSpec;
use tenrank_core::ranklab::{tensor_from_homogeneous, QuadraticForm};
use tenrank_core::tensorize::{
    read_expansion, read_tensor, write_expansion, write_tensor, Expansion,
};

const GOLDEN: &str = "tests/golden/compile_example.json";

fn strip_volatile(v: &mut Value, dir: &str) {
    match v {
        Value::Object(map) => {
            map.remove("ms");
            for x in map.values_mut() {
                strip_volatile(x, dir);
            }
        }
        Value::Array(xs) => xs.iter_mut().for_each(|x| strip_volatile(x, dir)),
        Value::String(s) => *s = s.replace(dir, "<out>"),
        _ => {}
    }
}

#[test]
fn compile_report_matches_golden() {
    let dir = tempdir().unwrap();
    let src = write_source(dir.path(), "ex.poly", EXAMPLE);
    let out = dir.path().join("out");
    let (code, mut report) =
        cli_json(&["compile", &src, "--field", "gf7", "--out", path_str(&out)]);
    assert_eq!(code, 0);
    strip_volatile(&mut report, path_str(&out));
    let text = serde_json::to_string_pretty(&report).unwrap();
    let golden = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join(GOLDEN);
    if std::env::var_os("TENRANK_BLESS").is_some() {
        std::fs::write(&golden, format!("{text}\n")).unwrap();
    }
    assert_eq!(text, std::fs::read_to_string(&golden).unwrap().trim_end());
    for f in ["system.json", "matrix.json", "tensor.json", "bundle.json"] {
        assert!(out.join(f).exists(), "{f}");
    }
}

#[test]
fn compile_text_report() {
    let dir = tempdir().unwrap();
    let src = write_source(dir.path(), "ex.poly", EXAMPLE);
    let (code, out, _) = cli(&["compile", &src, "--field", "gf7"]);
    assert_eq!(code, 0);
    assert!(
        out.contains("build-matrix: 9x9, n = 9, observation holds"),
        "{out}"
    );
    assert!(
        out.contains("build-tensor: 9x9x10, rank target 15"),
        "{out}"
    );
    assert!(out.contains("note: A2 violated at e1, e2 on y, x"), "{out}");

    let (code, strict) = cli_json(&["compile", &src, "--field", "gf7", "--strict"]);
    assert_eq!(code, 0);
    let stage = &strict["stages"][4];
    assert_eq!(stage["dims"], serde_json::json!([12, 12, 13]));
    assert_eq!(strict["stages"][2]["violations"], serde_json::json!([]));
}

#[test]
fn compile_is_deterministic() {
    let dir = tempdir().unwrap();
    let src = write_source(dir.path(), "ex.poly", EXAMPLE);
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert_eq!(
        cli(&["compile", &src, "--field", "qsqrt2", "--out", path_str(&a)]).0,
        0
    );
    assert_eq!(
        cli(&["compile", &src, "--field", "qsqrt2", "--out", path_str(&b)]).0,
        0
    );
    for f in ["system.json", "matrix.json", "tensor.json", "bundle.json"] {
        assert_eq!(
            std::fs::read(a.join(f)).unwrap(),
            std::fs::read(b.join(f)).unwrap(),
            "{f}"
        );
    }
}

#[test]
fn squares_get_copies() {
    let dir = tempdir().unwrap();
    let src = write_source(dir.path(), "sq.poly", "eq x^2 = 2;");
    let (code, report) = cli_json(&["compile", &src, "--field", "gf7"]);
    assert_eq!(code, 0);
    let normalize = &report["stages"][2];
    assert_eq!(normalize["stage"], "normalize");
    assert!(
        !normalize["introduced"].as_array().unwrap().is_empty(),
        "{normalize}"
    );
    assert_eq!(
        report["stages"][3]["observation"],
        serde_json::json!([true, true, true, true])
    );
}

#[test]
fn exit_codes() {
    let dir = tempdir().unwrap();
    let src = write_source(dir.path(), "ex.poly", EXAMPLE);
    let empty = write_source(dir.path(), "empty.poly", "");
    let broken = write_source(dir.path(), "broken.poly", "eq u = x*;");
    assert_eq!(cli(&[]).0, 2);
    assert_eq!(cli(&["--help"]).0, 0);
    assert_eq!(cli(&["compile", &src, "--field", "gf4"]).0, 2);
    assert_eq!(
        cli(&["compile", "/nonexistent/file", "--field", "gf7"]).0,
        2
    );
    assert_eq!(cli(&["compile", &empty, "--field", "gf7"]).0, 4);
    assert_eq!(cli(&["compile", &broken, "--field", "gf7"]).0, 4);
    assert_eq!(
        cli(&[
            "compile",
            &src,
            "--field",
            "gf7",
            "--strict",
            "--no-normalize"
        ])
        .0,
        2
    );

    let out = dir.path().join("out");
    assert_eq!(
        cli(&["compile", &src, "--field", "gf7", "--out", path_str(&out)]).0,
        0
    );
    let matrix = out.join("matrix.json");
    let tensor = out.join("tensor.json");
    assert_eq!(
        cli(&[
            "minrank",
            path_str(&matrix),
            "--field",
            "gf2",
            "--budget",
            "10"
        ])
        .0,
        3
    );
    assert_eq!(cli(&["minrank", path_str(&matrix), "--field", "q"]).0, 2);
    assert_eq!(
        cli(&["minrank", path_str(&matrix), "--mode", "witness"]).0,
        2
    );
    assert_eq!(
        cli(&["rank", path_str(&tensor), "--leq", "15", "--field", "gf5"]).0,
        4
    );
    assert_eq!(
        cli(&["rank", path_str(&tensor), "--leq", "15", "--budget", "5"]).0,
        3
    );
    assert_eq!(cli(&["eig0", path_str(&tensor)]).0, 4);

    let (code, report) = cli_json(&["compile", &empty, "--field", "gf7"]);
    assert_eq!(code, 4);
    assert_eq!(report["code"], 4);
}

#[test]
fn witness_flow_certifies_realizes_and_absorbs() {
    let dir = tempdir().unwrap();
    let src = write_source(dir.path(), "ex.poly", EXAMPLE);
    let out = dir.path().join("out");
    assert_eq!(
        cli(&["compile", &src, "--field", "gf7", "--out", path_str(&out)]).0,
        0
    );
    let p = |f: &str| out.join(f).to_str().unwrap().to_string();

    let (code, report) = cli_json(&[
        "minrank",
        &p("matrix.json"),
        "--mode",
        "witness",
        "--system",
        &p("system.json"),
        "--out",
        path_str(&out),
    ]);
    assert_eq!(code, 0);
    assert_eq!(report["rank"], 6);
    assert_eq!(report["expansion_terms"], 15);
    let (code, _, _) = cli(&[
        "minrank",
        &p("matrix.json"),
        "--field",
        "gf5",
        "--mode",
        "witness",
        "--system",
        &p("system.json"),
    ]);
    assert_eq!(code, 1);

    let (code, report) = cli_json(&["certify", &p("tensor.json"), &p("expansion.json")]);
    assert_eq!(code, 0);
    assert_eq!(report["verified"], true);
    assert_eq!(report["digest_matches"], true);

    let (code, report) = cli_json(&[
        "realize",
        &p("tensor.json"),
        &p("slices.json"),
        "-r",
        "15",
        "--out",
        path_str(&out),
    ]);
    assert_eq!(code, 0);
    assert_eq!(report["dimension"], 0);
    assert_eq!(
        cli(&["certify", &p("tensor.json"), &p("realization.json")]).0,
        0
    );
    assert_eq!(
        cli(&["realize", &p("tensor.json"), &p("slices.json"), "-r", "14"]).0,
        4
    );

    let (code, report) = cli_json(&[
        "absorb",
        &p("tensor.json"),
        &p("expansion.json"),
        "--slices",
        "1,2",
        "--out",
        path_str(&out),
    ]);
    assert_eq!(code, 0);
    assert_eq!(report["terms"], 15);
    assert_eq!(
        cli(&["certify", &p("tensor.json"), &p("absorbed.json")]).0,
        0
    );
    assert_eq!(
        cli(&[
            "absorb",
            &p("tensor.json"),
            &p("expansion.json"),
            "--slices",
            "11"
        ])
        .0,
        2
    );

    // flip one entry of the first term
    let t = read_tensor(&std::fs::read_to_string(p("tensor.json")).unwrap()).unwrap();
    let file = read_expansion(&std::fs::read_to_string(p("expansion.json")).unwrap()).unwrap();
    let f = FieldSpec::Prime(7);
    let mut e: Expansion = file.expansion;
    e.terms[0].u[0] = f.add(&e.terms[0].u[0], &f.one());
    std::fs::write(p("corrupt.json"), write_expansion(&e, &t)).unwrap();
    let (code, report) = cli_json(&["certify", &p("tensor.json"), &p("corrupt.json")]);
    assert_eq!(code, 1);
    assert_eq!(report["verified"], false);
}

#[test]
fn rank_on_a_single_constant() {
    let dir = tempdir().unwrap();
    let src = write_source(dir.path(), "c.poly", "eq c = 2;");
    let out = dir.path().join("out");
    assert_eq!(
        cli(&["compile", &src, "--field", "gf3", "--out", path_str(&out)]).0,
        0
    );
    let tensor = out.join("tensor.json");
    let (code, report) = cli_json(&[
        "rank",
        path_str(&tensor),
        "--leq",
        "3",
        "--out",
        path_str(&out),
    ]);
    assert_eq!(code, 0);
    assert_eq!(report["verdict"], "yes");
    assert_eq!(
        cli(&[
            "certify",
            path_str(&tensor),
            path_str(&out.join("certificate.json"))
        ])
        .0,
        0
    );
    let (code, report) = cli_json(&["rank", path_str(&tensor), "--leq", "1"]);
    assert_eq!(code, 1);
    assert_eq!(report["verdict"], "no");
}

#[test]
fn eig0_reports_a_vector() {
    let dir = tempdir().unwrap();
    let f = FieldSpec::Prime(5);
    // x0^2 + x1^2 vanishes at (1, 2) over GF5
    let forms = vec![QuadraticForm::new(vec![(0, 0, 1), (1, 1, 1)])];
    let t = tensor_from_homogeneous(&forms, 2, &f).unwrap();
    let path = dir.path().join("t.json");
    std::fs::write(&path, write_tensor(&t)).unwrap();
    let (code, report) = cli_json(&["eig0", path_str(&path)]);
    assert_eq!(code, 0);
    assert_eq!(report["eigenvector"], serde_json::json!([1, 2]));

    let forms = vec![QuadraticForm::new(vec![(0, 0, 1), (1, 1, 1)])];
    let t = tensor_from_homogeneous(&forms, 2, &FieldSpec::Prime(3)).unwrap();
    std::fs::write(&path, write_tensor(&t)).unwrap();
    assert_eq!(cli(&["eig0", path_str(&path)]).0, 1);
    assert_eq!(cli(&["eig0", path_str(&path), "--budget", "1"]).0, 3);
}
