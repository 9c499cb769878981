//! CLI-level behavior: JSON schema round-trip, determinism, exit codes.

use std::process::Command;

fn run(args: &[&str]) -> (Option<i32>, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_irrgar"))
        .args(args)
        .output()
        .expect("run irrgar");
    (out.status.code(), String::from_utf8_lossy(&out.stdout).into_owned())
}

#[test]
fn classify_json_round_trips() {
    let (code, text) = run(&["classify", "--mode", "confluent", "--json"]);
    assert_eq!(code, Some(0));
    let v: serde_json::Value = serde_json::from_str(&text).expect("valid JSON");
    let rows = v.as_array().expect("array of rows");
    assert_eq!(rows.len(), 3);
    for row in rows {
        let base = row["base"].as_array().expect("base");
        for datum in base {
            assert!(datum["kappa"].is_string());
            assert!(datum["theta"].is_string());
        }
        assert!(row["degree"].is_u64());
        assert!(row["passport"]["poles"].is_array());
        assert!(row["passport"]["free_simple"].is_u64());
        assert!(row["T"].is_i64());
        assert!(row["genus"].is_i64());
    }
    // re-run: byte identical
    let (_, text2) = run(&["classify", "--mode", "confluent", "--json"]);
    assert_eq!(text, text2);
}

#[test]
fn invariants_command_values() {
    let (code, text) = run(&["invariants", "--Q", "1/x - 2/(9*x^2)", "--point", "0"]);
    assert_eq!(code, Some(0));
    assert!(text.contains("kappa: 0"), "{text}");
    assert!(text.contains("theta: 1/3"), "{text}");

    let (code, text) = run(&["invariants", "--Q", "x^2 - 2*a", "--point", "inf"]);
    assert_eq!(code, Some(0));
    assert!(text.contains("kappa: 2"), "{text}");

    // non-square leading coefficient at an even-order pole: unsupported
    let (code, _) = run(&["invariants", "--Q", "2/x^4", "--point", "0"]);
    assert_eq!(code, Some(3));
}

#[test]
fn verify_painleve_row_exits_zero() {
    let (code, text) = run(&["verify", "--solution", "piii-d7"]);
    assert_eq!(code, Some(0), "{text}");
    assert!(text.contains("residual identically zero"), "{text}");
}

#[test]
fn scatter_command_reports_ledger() {
    let (code, text) = run(&[
        "scatter",
        "--base",
        "(0,1/3)(1/2,0)",
        "--passport",
        "d=6; poles=[4,1,1],[4,2]; free=simple*3",
    ]);
    assert_eq!(code, Some(0));
    assert!(text.contains("scattered"), "{text}");
    assert!(text.contains("N-B"), "{text}");
}

#[test]
fn tables_command_prints_all_sections() {
    let (code, text) = run(&["tables"]);
    assert_eq!(code, Some(0));
    for needle in [
        "isomonodromy dictionary",
        "Algebraic solutions",
        "Logarithmic classification",
        "scattered covers",
        "confluent covers",
        "Classical algebraic solutions",
    ] {
        assert!(text.contains(needle), "missing section {needle}");
    }
}
