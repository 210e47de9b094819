//! End-to-end checks of the command-line contract: flags, exit codes and
//! output formats.

use std::process::{Command, Output};

fn nchh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nchh"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn integrate_simpson_quadratic() {
    let out = nchh(&[
        "integrate", "--rule", "simpson", "--n", "2", "--a", "0", "--b", "1", "--f", "x^2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("mean:  0.3333333333333333"));
}

#[test]
fn integrate_trapezoid_known_value() {
    let out = nchh(&[
        "integrate", "--rule", "trapezoid", "--n", "4", "--a", "0", "--b", "1", "--f", "x^2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("value: 0.34375"));
}

#[test]
fn integrate_json_has_schema() {
    let out = nchh(&[
        "integrate", "--rule", "trapezoid", "--n", "2", "--a", "0", "--b", "1", "--f", "x",
        "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("\"schema\": \"nchh/1\""));
    assert!(text.contains("\"timestamp\""));
    assert!(text.contains("\"mean\": 0.5"));
}

#[test]
fn certify_monotone_example() {
    let out = nchh(&[
        "certify", "--class", "monotone", "--rule", "trapezoid", "--n", "4", "--a", "0", "--b",
        "1", "--f", "x", "--phi", "pow:1,1",
    ]);
    assert_eq!(out.status.code(), Some(0), "holds must exit 0");
    let text = stdout(&out);
    assert!(text.contains("lower:      -0.5"));
    assert!(text.contains("upper:      1.5"));
    assert!(text.contains("holds:      true"));
}

#[test]
fn certify_convex_example_with_verification() {
    let out = nchh(&[
        "certify", "--class", "convex", "--rule", "trapezoid", "--n", "2", "--a", "0", "--b", "1",
        "--f", "x^2", "--phi", "pow:0,1", "--verify",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("lower:      0.25"));
    assert!(text.contains("upper:      0.5"));
    assert!(text.contains("hypothesis: verified"));
}

#[test]
fn certify_violated_bound_exits_one() {
    // -x is not monotone for zero phi; the envelope misses the mean.
    let out = nchh(&[
        "certify", "--class", "monotone", "--rule", "trapezoid", "--n", "4", "--a", "0", "--b",
        "1", "--f", "-x", "--phi", "const:0", "--verify",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("holds:      false"));
    assert!(text.contains("hypothesis: failed"));
}

#[test]
fn certify_unstated_simpson_convex_bound_is_an_error() {
    let out = nchh(&[
        "certify", "--class", "convex", "--rule", "simpson", "--n", "2", "--a", "0", "--b", "1",
        "--f", "x^2", "--phi", "const:0",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("trapezoid"));
}

#[test]
fn certify_csv_has_exact_header() {
    let out = nchh(&[
        "certify", "--class", "monotone", "--rule", "trapezoid", "--n", "4", "--a", "0", "--b",
        "1", "--f", "x", "--phi", "pow:1,1", "--format", "csv",
    ]);
    let text = stdout(&out);
    assert!(text.starts_with("rule,n,a,b,f,phi,class,mean,lower,upper,holds,n_free\n"));
    assert_eq!(text.lines().count(), 2);
}

#[test]
fn check_class_pass_and_fail_examples() {
    let out = nchh(&[
        "check-class", "--class", "monotone", "--f", "x", "--phi", "const:0", "--a", "0", "--b",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("verdict:         pass"));

    let out = nchh(&[
        "check-class", "--class", "monotone", "--f", "0-x", "--phi", "const:0.5", "--a", "0",
        "--b", "1", "--grid", "101",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("verdict:         fail"));
    assert!(text.contains("witness:         (x=0, y=1"));

    let out = nchh(&[
        "check-class", "--class", "affine", "--f", "x^2", "--phi", "pow:1,1", "--a", "0", "--b",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn parse_errors_exit_two() {
    let out = nchh(&[
        "integrate", "--rule", "trapezoid", "--n", "2", "--a", "0", "--b", "1", "--f", "x +",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("parse error"));

    let out = nchh(&[
        "certify", "--class", "monotone", "--rule", "trapezoid", "--n", "2", "--a", "0", "--b",
        "1", "--f", "x", "--phi", "pow:-1,2",
    ]);
    assert_eq!(out.status.code(), Some(2));

    // Degenerate interval is a specification error.
    let out = nchh(&[
        "integrate", "--rule", "trapezoid", "--n", "2", "--a", "1", "--b", "1", "--f", "x",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn evaluation_errors_exit_four() {
    let out = nchh(&[
        "integrate", "--rule", "trapezoid", "--n", "4", "--a", "-1", "--b", "1", "--f", "log(x)",
    ]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stderr(&out).contains("evaluation error"));
}

#[test]
fn sweep_skips_inadmissible_n_with_warning() {
    let out = nchh(&[
        "sweep", "--rule", "simpson", "--n-min", "2", "--n-max", "7", "--a", "0", "--b", "1",
        "--f", "x", "--phi", "const:0", "--class", "monotone", "--format", "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let body: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(body.len(), 3); // n = 2, 4, 6
    let errs = stderr(&out);
    for n in [3, 5, 7] {
        assert!(errs.contains(&format!("skipping n={n}")), "missing warning for n={n}");
    }
}

#[test]
fn sweep_csv_header_extends_certificate_header() {
    let out = nchh(&[
        "sweep", "--rule", "trapezoid", "--n-min", "1", "--n-max", "4", "--a", "0", "--b", "1",
        "--f", "x^2", "--phi", "pow:1,2", "--class", "convex", "--format", "csv",
    ]);
    let text = stdout(&out);
    assert!(text.starts_with(
        "rule,n,a,b,f,phi,class,mean,lower,upper,holds,n_free,width,e_n,n2_phi\n"
    ));
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn sweep_diagnostic_columns_track_phi_growth() {
    let sweep = |phi: &str| -> Vec<(u32, f64, f64, f64)> {
        let out = nchh(&[
            "sweep", "--rule", "trapezoid", "--n-min", "1", "--n-max", "32", "--a", "0", "--b",
            "1", "--f", "x^2", "--phi", phi, "--class", "convex", "--format", "csv",
        ]);
        assert_eq!(out.status.code(), Some(0));
        stdout(&out)
            .lines()
            .skip(1)
            .map(|line| {
                let cells: Vec<&str> = line.split(',').collect();
                // phi labels with commas are quoted and occupy two cells
                let shift = cells.len() - 15;
                (
                    cells[1].parse().unwrap(),
                    cells[12 + shift].parse().unwrap(),
                    cells[13 + shift].parse().unwrap(),
                    cells[14 + shift].parse().unwrap(),
                )
            })
            .collect()
    };

    // Cubic phi: envelope width shrinks toward the classical gap 0.25.
    let rows = sweep("pow:1,3");
    for w in rows.windows(2) {
        assert!(w[1].1 <= w[0].1 + 1e-12, "width must shrink: {w:?}");
    }
    let last = rows.last().unwrap();
    assert!(last.1 - 0.25 < 0.02, "width {} must approach 0.25", last.1);

    // Quadratic phi: e_n column converges to (b-a)²/12 and n²Φ stays 1.
    let rows = sweep("pow:1,2");
    let last = rows.last().unwrap();
    assert!((last.2 - 1.0 / 12.0).abs() < 1e-3, "e_n {} vs 1/12", last.2);
    for row in &rows {
        assert!((row.3 - 1.0).abs() < 1e-12);
    }

    // Constant phi: width grows quadratically in n.
    let rows = sweep("const:0.1");
    let w4 = rows.iter().find(|r| r.0 == 4).unwrap().1;
    let w32 = rows.iter().find(|r| r.0 == 32).unwrap().1;
    assert!(w32 / w4 > 30.0, "width should grow ~n²: {w4} -> {w32}");
}

#[test]
fn identities_exit_zero_and_report_counts() {
    let out = nchh(&["identities", "--n-max", "100"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("odd-weights: 100/100 pass"));
    assert!(text.contains("simpson38-weights: 33/33 pass"));

    let out = nchh(&["identities", "--n-max", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("odd-weights: 2/2 pass"));
}

#[test]
fn seed_flag_changes_noise_only() {
    let base = nchh(&[
        "integrate", "--rule", "trapezoid", "--n", "8", "--a", "0", "--b", "1", "--f",
        "x + noise(1, 0.1)",
    ]);
    let reseeded = nchh(&[
        "integrate", "--rule", "trapezoid", "--n", "8", "--a", "0", "--b", "1", "--f",
        "x + noise(1, 0.1)", "--seed", "5",
    ]);
    let repeat = nchh(&[
        "integrate", "--rule", "trapezoid", "--n", "8", "--a", "0", "--b", "1", "--f",
        "x + noise(1, 0.1)",
    ]);
    assert_eq!(base.stdout, repeat.stdout, "same seed must reproduce bytes");
    assert_ne!(base.stdout, reseeded.stdout, "seed must reach noise terms");
}
