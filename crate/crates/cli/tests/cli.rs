use std::io::Write as _;

use sp4cert::certify::TableReport;
use sp4cert::certify::{builtin_certificate, VerdictReport};
use sp4cert_cli::{run, EXIT_FAIL, EXIT_OK, EXIT_USAGE};

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("sp4cert").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn verify_builtin_passes() {
    let (code, out, err) = call(&["verify", "--case", "11"]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert!(out
        .trim_end()
        .ends_with("ARITHMETIC-CERTIFIED (assuming BH density)"));
}

#[test]
fn verify_json_round_trips() {
    let (code, out, _) = call(&["verify", "--case", "4", "--json"]);
    assert_eq!(code, EXIT_OK);
    let report: VerdictReport = serde_json::from_str(&out).unwrap();
    assert!(report.passed());
    assert_eq!(
        serde_json::to_string_pretty(&report).unwrap(),
        out.trim_end()
    );
}

#[test]
fn table_passes_and_round_trips() {
    let (code, out, _) = call(&["table"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("-6X^3 + 3X^2 - 6X"));
    let (code, out, _) = call(&["--json", "table"]);
    assert_eq!(code, EXIT_OK);
    let report: TableReport = serde_json::from_str(&out).unwrap();
    assert_eq!(report.rows.len(), 14);
}

#[test]
fn gens_prints_companion_matrices() {
    let (code, out, _) = call(&["gens", "--alpha", "0,0,0,0", "--beta", "1/2,1/2,1/2,1/2"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("g = X^4 + 4X^3 + 6X^2 + 4X + 1"));
    let (_, json, _) = call(&[
        "gens",
        "--json",
        "--alpha",
        "0,0,0,0",
        "--beta",
        "1/2,1/2,1/2,1/2",
    ]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["B"][1][3], "-4");
    assert_eq!(v["C"][0][3], "-8");
}

#[test]
fn form_and_basis_commands() {
    let (code, out, _) = call(&["form", "--case", "11", "--json"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["gram"][0], serde_json::json!(["0", "1", "4/5", "-9/5"]));
    assert_eq!(v["kernel_dim"], 1);
    let (code, out, _) = call(&["basis", "--case", "4"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("lambda1 = -1/2"));
    assert!(out.contains("lambda2 = -81/2"));
    let (code, _, _) = call(&["basis", "--alpha", "0,0,0,0", "--beta", "1/5,2/5,3/5,4/5"]);
    assert_eq!(code, EXIT_OK);
}

#[test]
fn tampered_certificate_file_fails() {
    let mut cert = builtin_certificate(10).unwrap();
    let z = cert.expected.get_mut("z").unwrap();
    z.set(0, 2, sp4cert::exact::rat(-268435455));
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(cert.to_json().as_bytes()).unwrap();
    let path = file.path().to_str().unwrap();
    let (code, out, _) = call(&["verify", "--cert", path]);
    assert_eq!(code, EXIT_FAIL);
    assert!(out.contains("z(1,3): expected -268435455, computed -268435456"));
    assert!(out.trim_end().ends_with("FAIL (E5-EXPECTED-MISMATCH)"));
}

#[test]
fn exported_certificate_verifies_from_file() {
    let (code, json, _) = call(&["export", "--case", "8"]);
    assert_eq!(code, EXIT_OK);
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(json.as_bytes()).unwrap();
    let (code, _, _) = call(&["verify", "--cert", file.path().to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
}

#[test]
fn classify_matrix_file() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(file, "1 -82944 0 0; 0 1 0 0; 0 0 1 -2304; 0 0 0 1").unwrap();
    let path = file.path().to_str().unwrap();
    let (code, out, _) = call(&[
        "classify",
        "--matrix",
        path,
        "--lambda1",
        "-4/5",
        "--lambda2",
        "144/5",
    ]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.trim(), "+(e1-e2) (parameter -82944)");
    let (code, out, _) = call(&[
        "classify",
        "--matrix",
        path,
        "--lambda1",
        "1",
        "--lambda2",
        "1",
    ]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.trim(), "not a single root element");

    let mut lines = tempfile::NamedTempFile::new().unwrap();
    writeln!(lines, "1 0 0 -1152\n0 1 0 0\n0 0 1 0\n0 0 0 1").unwrap();
    let (code, out, _) = call(&[
        "classify",
        "--json",
        "--matrix",
        lines.path().to_str().unwrap(),
        "--lambda1",
        "-4/5",
        "--lambda2",
        "144/5",
    ]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["Root"]["root"], "+2e1");
    assert_eq!(v["Root"]["parameter"], "-1152");
}

#[test]
fn search_command() {
    let (code, out, _) = call(&["search", "--case", "11", "--depth", "3", "--sv-depth", "2"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("depth 3  B^-3*C*B^3  -2e2"));
    assert!(out.contains("no word found"));
    let (code, out, _) = call(&[
        "search",
        "--json",
        "--alpha",
        "0,0,0,0",
        "--beta",
        "1/6,1/6,5/6,5/6",
        "--depth",
        "0",
    ]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["sv_scan"]["word"], "A");
    assert_eq!(v["sv_scan"]["c"], "-2");
}

#[test]
fn usage_errors_exit_2_with_one_line() {
    let cases: &[&[&str]] = &[
        &["verify", "--bogus"],
        &["verify"],
        &["verify", "--case", "5"],
        &["verify", "--cert", "/nonexistent/cert.json"],
        &["gens", "--alpha", "0,0,0", "--beta", "1/2,1/2,1/2,1/2"],
        &["gens", "--alpha", "0,0,0,0", "--beta", "1/2,1/2,x,1/2"],
        &["gens", "--alpha", "0,0,0,0", "--beta", "1/3,1/3,1/2,1/2"],
        &["gens"],
        &[
            "classify",
            "--matrix",
            "/nonexistent",
            "--lambda1",
            "1",
            "--lambda2",
            "1",
        ],
        &["search", "--case", "11", "--sign", "sideways"],
        &["frobnicate"],
    ];
    for args in cases {
        let (code, out, err) = call(args);
        assert_eq!(code, EXIT_USAGE, "{args:?}: {out}{err}");
        assert_eq!(err.trim_end().lines().count(), 1, "{args:?}: {err}");
    }
}

#[test]
fn malformed_inputs_exit_2() {
    let mut bad = tempfile::NamedTempFile::new().unwrap();
    writeln!(bad, "1 2 3; 4 5 6").unwrap();
    let p = bad.path().to_str().unwrap();
    let (code, _, err) = call(&[
        "classify",
        "--matrix",
        p,
        "--lambda1",
        "1",
        "--lambda2",
        "1",
    ]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("4x4"));
    let (code, _, _) = call(&["verify", "--cert", p]);
    assert_eq!(code, EXIT_USAGE);
    let mut nonunip = tempfile::NamedTempFile::new().unwrap();
    writeln!(nonunip, "2 0 0 0; 0 1 0 0; 0 0 1 0; 0 0 0 1").unwrap();
    let q = nonunip.path().to_str().unwrap();
    let (code, _, _) = call(&[
        "classify",
        "--matrix",
        q,
        "--lambda1",
        "1/0",
        "--lambda2",
        "1",
    ]);
    assert_eq!(code, EXIT_USAGE);
    let (code, _, _) = call(&[
        "classify",
        "--matrix",
        q,
        "--lambda1",
        "1",
        "--lambda2",
        "1",
    ]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn help_exits_zero() {
    let (code, out, _) = call(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("verify"));
}
