//! End-to-end tests of the installed binary: exit codes, file formats,
//! determinism, and the measurement-data-only replay path.

use std::path::Path;
use std::process::{Command, Output};

use num_complex::Complex64;

fn holoising(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_holoising"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn assert_exit(out: &Output, code: i32) {
    assert_eq!(
        out.status.code(),
        Some(code),
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).expect("output file exists")
}

#[test]
fn coherence_matches_closed_form_on_single_site() {
    // 1x1 torus: L(u) = cosh(beta h + iu)/cosh(beta h)
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.csv");
    let run = holoising(&[
        "coherence", "--rows", "1", "--cols", "1", "--beta", "0.4", "--h", "0.3", "--points",
        "13", "--span", "half", "--out", out.to_str().unwrap(),
    ]);
    assert_exit(&run, 0);
    let text = read(&out);
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("# coherence N=1 M=1 beta="));
    assert!(header.contains("eta=1"));
    assert_eq!(lines.next().unwrap(), "u,re,im");
    let bh = 0.4 * 0.3;
    for line in lines {
        let v: Vec<f64> = line.split(',').map(|s| s.parse().unwrap()).collect();
        let want = Complex64::new(bh, v[0]).cosh() / Complex64::new(bh, 0.0).cosh();
        assert!((v[1] - want.re).abs() < 1e-12, "{line}");
        assert!((v[2] - want.im).abs() < 1e-12, "{line}");
    }
}

#[test]
fn outputs_are_byte_identical_across_reruns() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for out in [&a, &b] {
        let run = holoising(&[
            "coherence", "--rows", "2", "--cols", "4", "--points", "19", "--out",
            out.to_str().unwrap(),
        ]);
        assert_exit(&run, 0);
    }
    assert_eq!(read(&a), read(&b));

    let ja = dir.path().join("a.json");
    let jb = dir.path().join("b.json");
    for out in [&ja, &jb] {
        let run = holoising(&[
            "fit-c", "--lattices", "2x20,3x20,4x20", "--direct", "--out",
            out.to_str().unwrap(),
        ]);
        assert_exit(&run, 0);
    }
    assert_eq!(read(&ja), read(&jb));
}

#[test]
fn reconstruct_from_csv_replays_bit_identically() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("coh.csv");
    let direct = dir.path().join("direct.json");
    let replay = dir.path().join("replay.json");

    let args = [
        "--rows", "2", "--cols", "5", "--beta", "0.45", "--h", "0.25", "--points", "97",
        "--span", "quarter",
    ];
    let mut coh: Vec<&str> = vec!["coherence"];
    coh.extend_from_slice(&args);
    coh.extend_from_slice(&["--out", csv.to_str().unwrap()]);
    assert_exit(&holoising(&coh), 0);

    let mut rec: Vec<&str> = vec!["reconstruct"];
    rec.extend_from_slice(&args);
    rec.extend_from_slice(&["--out", direct.to_str().unwrap()]);
    assert_exit(&holoising(&rec), 0);

    let run = holoising(&[
        "reconstruct", "--from-csv", csv.to_str().unwrap(), "--out", replay.to_str().unwrap(),
    ]);
    assert_exit(&run, 0);

    assert_eq!(read(&direct), read(&replay));
    let v: serde_json::Value = serde_json::from_str(&read(&replay)).unwrap();
    for key in [
        "N", "M", "beta", "h", "lambda_prime", "points", "period", "ratio_log_mag",
        "ratio_phase", "residual_imag", "f_per_site",
    ] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn validation_failures_exit_2() {
    // 5 is not a 3k+1 sample count
    let run = holoising(&["coherence", "--rows", "2", "--cols", "2", "--points", "5"]);
    assert_exit(&run, 2);
    assert!(String::from_utf8_lossy(&run.stderr).contains("3k+1"));

    // target field outside the contour
    let run = holoising(&[
        "reconstruct", "--rows", "2", "--cols", "2", "--h", "0.1", "--lambda-prime", "0.2",
    ]);
    assert_exit(&run, 2);

    // quarter span on an odd-area lattice
    let run = holoising(&[
        "coherence", "--rows", "3", "--cols", "3", "--points", "7", "--span", "quarter",
    ]);
    assert_exit(&run, 2);

    // mixed areas in the elongation family
    let run = holoising(&["elongation", "--lattices", "2x6,3x5", "--points", "7"]);
    assert_exit(&run, 2);

    // too few lattices for a fit
    let run = holoising(&["fit-c", "--lattices", "2x20,3x20", "--direct"]);
    assert_exit(&run, 2);
}

#[test]
fn capacity_failures_exit_4() {
    let run = holoising(&["reconstruct", "--rows", "15", "--cols", "16", "--points", "7"]);
    assert_exit(&run, 4);
}

#[test]
fn oracle_small_run_passes_and_strict_tolerance_fails() {
    let t0 = std::time::Instant::now();
    let run = holoising(&["oracle", "--area-limit", "9"]);
    assert_exit(&run, 0);
    assert!(
        t0.elapsed().as_secs_f64() < 10.0,
        "restricted oracle run took {:?}",
        t0.elapsed()
    );
    let text = String::from_utf8_lossy(&run.stdout);
    assert!(text.contains("all deviations within tolerance"));

    // an unattainable tolerance must flip the exit code (CI signal path)
    let run = holoising(&["oracle", "--area-limit", "4", "--max-log-dev", "0"]);
    assert_exit(&run, 3);
}

#[test]
fn elongation_emits_sorted_symmetric_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("e.csv");
    let run = holoising(&[
        "elongation", "--lattices", "1x12,2x6,3x4", "--include-swapped", "--beta", "0.4",
        "--h", "0.3", "--points", "97", "--out", out.to_str().unwrap(),
    ]);
    assert_exit(&run, 0);
    let text = read(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "x,ln_x,F_total,f_per_site");
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|s| s.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 6);
    assert!(rows.windows(2).all(|w| w[0][1] <= w[1][1]), "ln_x sorted");
    // modular symmetry: swapped pairs carry equal F_total
    let f_of = |x: f64| {
        rows.iter()
            .find(|r| (r[0] - x).abs() < 1e-12)
            .map(|r| r[2])
            .unwrap()
    };
    assert_eq!(f_of(12.0), f_of(1.0 / 12.0));
    assert_eq!(f_of(3.0), f_of(1.0 / 3.0));
}

#[test]
fn fit_c_reports_and_points_csv() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("fit.json");
    let csv = dir.path().join("points.csv");
    let run = holoising(&[
        "fit-c", "--lattices", "2x30,3x30,4x30,5x30", "--beta", "0.4", "--h", "0.3",
        "--points", "394", "--out", json.to_str().unwrap(), "--points-csv", csv.to_str().unwrap(),
    ]);
    assert_exit(&run, 0);
    let v: serde_json::Value = serde_json::from_str(&read(&json)).unwrap();
    assert_eq!(v["points"].as_array().unwrap().len(), 4);
    for key in ["slope", "slope_stderr", "intercept", "c", "c_stderr"] {
        assert!(v[key].is_number(), "missing {key}");
    }
    let text = read(&csv);
    assert!(text.starts_with("N,M,f,residual\n"));
    assert_eq!(text.lines().count(), 5);

    // reconstructed and direct pipelines agree on these small strips to
    // well under the quadrature tolerance
    let direct = dir.path().join("fit_direct.json");
    let run = holoising(&[
        "fit-c", "--lattices", "2x30,3x30,4x30,5x30", "--beta", "0.4", "--direct", "--out",
        direct.to_str().unwrap(),
    ]);
    assert_exit(&run, 0);
    let d: serde_json::Value = serde_json::from_str(&read(&direct)).unwrap();
    let dc = (v["c"].as_f64().unwrap() - d["c"].as_f64().unwrap()).abs();
    assert!(dc < 1e-6, "pipelines disagree: {dc}");
}
