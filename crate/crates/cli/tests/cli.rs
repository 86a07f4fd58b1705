//! End-to-end tests for the `mbalance` binary.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mbalance"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

/// The markdown grid round-trips back to the integer bound matrix, with
/// excluded cells marked by a multiplication sign.
#[test]
fn bounds_md_grid_roundtrip() {
    let out = run(&["bounds", "--m-range", "2..5", "--format", "md"]);
    assert!(out.status.success(), "bounds failed: {:?}", out);
    let text = stdout(&out);

    let mut grid: Vec<Vec<Option<u32>>> = Vec::new();
    for line in text.lines().skip(2) {
        let cells: Vec<&str> = line
            .trim_matches('|')
            .split('|')
            .map(str::trim)
            .collect();
        let row = cells[1..]
            .iter()
            .map(|c| match *c {
                "\u{d7}" => None,
                v => Some(v.parse().expect("integer bound")),
            })
            .collect();
        grid.push(row);
    }

    let expected = [
        vec![Some(1), Some(1), None, None, None],
        vec![Some(2), Some(2), Some(2), None, None],
        vec![Some(2), Some(3), Some(3), Some(3), None],
        vec![Some(2), Some(3), Some(3), Some(3), Some(3)],
    ];
    assert_eq!(grid, expected);
}

/// Identical invocations produce byte-identical stdout; timing goes to
/// stderr only.
#[test]
fn deterministic_output() {
    for args in [
        vec!["roots", "--m-range", "2..6", "--format", "json"],
        vec!["bounds", "--m-range", "3..4", "--format", "csv"],
        vec!["brute", "--m", "2", "--lengths", "1..32", "--prefix-len", "4000"],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert!(a.status.success(), "{:?} failed", args);
        assert_eq!(a.stdout, b.stdout, "nondeterministic stdout for {:?}", args);
        assert!(
            !stdout(&a).contains("elapsed"),
            "timing leaked into stdout for {:?}",
            args
        );
    }
}

/// Malformed ranges and unknown subcommands are usage errors: exit code 2.
#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["bounds", "--m-range", "12..2"],
        vec!["bounds", "--m-range", "banana"],
        vec!["global", "--m", "3"],
        vec!["nonsense"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "args {:?}: {:?}", args, out);
    }
}

/// Brute-force CSV ends with per-letter and overall roll-up lines, and the
/// Fibonacci word is 1-balanced over short prefixes.
#[test]
fn brute_csv_rollup() {
    let out = run(&[
        "brute", "--m", "2", "--lengths", "1..64", "--prefix-len", "20000", "--format", "csv",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("L,letter,min,max,spread,argmax\n"));
    assert!(text.contains("# rollup,letter=0,max_spread=1\n"));
    assert!(text.contains("# rollup,letter=1,max_spread=1\n"));
    assert!(text.trim_end().ends_with("# rollup,overall,max_spread=1"));
}

/// The root report marks every conjugate as inside its argument window and
/// certifies the moduli product.
#[test]
fn roots_json_windows() {
    let out = run(&["roots", "--m-range", "2..8", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).expect("valid json");
    let reports = v["reports"].as_array().expect("reports array");
    assert_eq!(reports.len(), 7);
    for rep in reports {
        let m = rep["m"].as_u64().unwrap();
        assert_eq!(rep["moduli_product"]["pass"], true, "m = {m}");
        let roots = rep["roots"].as_array().unwrap();
        assert_eq!(roots.len() as u64, m - 1, "m = {m}");
        for r in roots {
            assert_eq!(r["in_window"], true, "m = {m}");
        }
    }
}

/// The m = 4 table report carries the known symbolic head sums.
#[test]
fn table12_symbolic_heads() {
    let out = run(&["table12", "--m", "4", "--format", "md"]);
    assert!(out.status.success());
    let text = stdout(&out);
    for needle in [
        "1664 + -3205/beta^1",
        "286 + -1057/beta^2",
        "-487 + 3499/beta^3",
        "-86 + 1209/beta^4",
    ] {
        assert!(text.contains(needle), "missing {needle:?}");
    }
    assert!(text.contains("| 0 | (1,0,0,0) | + | - | - | - |"));
}

/// The built-in self checks all pass and report a summary line.
#[test]
fn verify_all_passes() {
    let out = run(&["verify-all"]);
    assert!(out.status.success(), "{:?}", out);
    let text = stdout(&out);
    assert!(!text.contains("FAIL"), "{text}");
    assert!(text.lines().last().unwrap().ends_with("0 failed"));
}
