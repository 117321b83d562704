//! End-to-end tests of the command-line binary: exit codes, output
//! determinism, and the re-parseability of every file it writes.

use lumesh::{haar_random_unitary, tritter_matrix, ComplexMatrix};
use num_complex::Complex64;
use std::path::Path;
use std::process::Command;

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_lumesh"))
        .args(args)
        .output()
        .expect("binary spawns");
    (
        out.status.code().expect("no signal"),
        String::from_utf8(out.stdout).expect("utf8 stdout"),
        String::from_utf8(out.stderr).expect("utf8 stderr"),
    )
}

fn write(path: &Path, contents: &str) {
    std::fs::write(path, contents).expect("test file writes");
}

#[test]
fn decompose_tritter_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("u3.json");
    write(&input, &tritter_matrix().to_json().unwrap());
    let (code, stdout, _) = run(&[
        "decompose",
        "--scheme",
        "clements",
        "--input",
        input.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "tritter reconstructs within default tolerance");
    assert!(stdout.contains("scheme: clements"));
    assert!(stdout.contains("reconstruction distance:"));
    assert!(stdout.contains("n_bs=6 n_ps=9"), "3-mode mesh totals");
}

#[test]
fn decompose_mbs3_rejects_wrong_dimension() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("u4.json");
    write(&input, &haar_random_unitary(4, 1).unwrap().to_json().unwrap());
    let (code, _, stderr) = run(&[
        "decompose",
        "--scheme",
        "mbs3",
        "--input",
        input.to_str().unwrap(),
    ]);
    assert_eq!(code, 2, "dimension contract violation is exit 2");
    assert!(stderr.contains("3 modes"), "stderr names the constraint: {stderr}");
}

#[test]
fn decompose_random_bwc_reports_counts() {
    let (code, stdout, _) = run(&["decompose", "--scheme", "bwc", "--random", "6", "--seed", "1"]);
    assert_eq!(code, 0);
    assert!(
        stdout.contains("n_fixed_mbs=5"),
        "six modes need five fixed blocks: {stdout}"
    );
    assert!(stdout.contains("n_bs=5"), "six modes keep five boundary couplers");
}

#[test]
fn decompose_output_is_byte_deterministic() {
    let args = ["decompose", "--scheme", "clements", "--random", "5", "--seed", "42"];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(first, second, "identical input and seed must reproduce bytes");
}

#[test]
fn decompose_rejects_non_unitary_with_deviation() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bad.json");
    let m = ComplexMatrix::from_rows(&[
        vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        vec![Complex64::new(0.0, 0.0), Complex64::new(2.0, 0.0)],
    ])
    .unwrap();
    write(&input, &m.to_json().unwrap());
    let (code, _, stderr) = run(&[
        "decompose",
        "--scheme",
        "reck",
        "--input",
        input.to_str().unwrap(),
    ]);
    assert_eq!(code, 3, "non-unitary input is exit 3");
    assert!(
        stderr.contains("not unitary") && stderr.contains("e"),
        "deviation norm is printed: {stderr}"
    );
}

#[test]
fn decompose_rejects_garbage_json() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("junk.json");
    write(&input, "{ not json ");
    let (code, _, _) = run(&[
        "decompose",
        "--scheme",
        "reck",
        "--input",
        input.to_str().unwrap(),
    ]);
    assert_eq!(code, 2);
}

#[test]
fn decompose_missing_source_is_usage_error() {
    let (code, _, _) = run(&["decompose", "--scheme", "reck"]);
    assert_eq!(code, 2, "clap enforces exactly one input source");
    let (code, _, _) = run(&["decompose", "--scheme", "reck", "--random", "3", "--input", "x.json"]);
    assert_eq!(code, 2, "both sources at once rejected");
}

#[test]
fn decompose_tolerance_gates_exit_code() {
    let (code, stdout, stderr) = run(&[
        "decompose",
        "--scheme",
        "reck",
        "--random",
        "4",
        "--tolerance",
        "1e-300",
    ]);
    assert_eq!(code, 4, "unreachable tolerance turns success into exit 4");
    assert!(stdout.contains("reconstruction distance:"), "distance still printed");
    assert!(stderr.contains("exceeds tolerance"));
}

#[test]
fn written_circuit_verifies_against_its_source() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("u5.json");
    let circuit = dir.path().join("c5.json");
    write(&input, &haar_random_unitary(5, 11).unwrap().to_json().unwrap());
    let (code, stdout, _) = run(&[
        "decompose",
        "--scheme",
        "bwc",
        "--input",
        input.to_str().unwrap(),
        "--output",
        circuit.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(stdout.contains("circuit JSON written to"));

    let (code, stdout, _) = run(&[
        "verify",
        "--circuit",
        circuit.to_str().unwrap(),
        "--matrix",
        input.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "written circuit re-parses and matches its source");
    assert!(stdout.starts_with("distance:"));
}

#[test]
fn verify_flags_unrelated_matrix_and_width_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("u4.json");
    let circuit = dir.path().join("c4.json");
    write(&input, &haar_random_unitary(4, 2).unwrap().to_json().unwrap());
    let (code, _, _) = run(&[
        "decompose",
        "--scheme",
        "clements",
        "--input",
        input.to_str().unwrap(),
        "--output",
        circuit.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);

    let unrelated = dir.path().join("other.json");
    write(&unrelated, &haar_random_unitary(4, 99).unwrap().to_json().unwrap());
    let (code, _, _) = run(&[
        "verify",
        "--circuit",
        circuit.to_str().unwrap(),
        "--matrix",
        unrelated.to_str().unwrap(),
    ]);
    assert_eq!(code, 4, "unrelated matrix is over tolerance");

    let mismatched = dir.path().join("u6.json");
    write(&mismatched, &haar_random_unitary(6, 5).unwrap().to_json().unwrap());
    let (code, _, _) = run(&[
        "verify",
        "--circuit",
        circuit.to_str().unwrap(),
        "--matrix",
        mismatched.to_str().unwrap(),
    ]);
    assert_eq!(code, 2, "width mismatch is a contract violation");
}

#[test]
fn report_emits_table_and_exact_csv_header() {
    let (code, stdout, _) = run(&["report", "--min", "2", "--max", "8"]);
    assert_eq!(code, 0);
    assert!(
        stdout.contains("N,scheme,n_bs,n_ps,n_phase_masks,n_fixed_mbs\n"),
        "exact CSV header required"
    );
    assert!(stdout.contains("8,clements,56,64,0,0"), "mesh totals at N=8: {stdout}");
    let bwc8: Vec<&str> = stdout
        .lines()
        .filter(|l| l.starts_with("8,bwc,"))
        .collect();
    assert_eq!(bwc8.len(), 1);
    let fields: Vec<&str> = bwc8[0].split(',').collect();
    assert_eq!(fields[2], "7", "N-1 standalone couplers at N=8");
    assert_eq!(fields[5], "7", "N-1 fixed blocks at N=8");
    assert!(fields[4].parse::<usize>().unwrap() <= 10, "at most N+2 masks at N=8");
    // Table header present and aligned ahead of the CSV block.
    assert!(stdout.contains("scheme"));
    let (code2, stdout2, _) = run(&["report", "--min", "2", "--max", "8"]);
    assert_eq!((code, &stdout), (code2, &stdout2), "report is deterministic");
}

#[test]
fn report_rejects_bad_ranges() {
    let (code, _, _) = run(&["report", "--min", "0", "--max", "4"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["report", "--min", "5", "--max", "3"]);
    assert_eq!(code, 2);
}

#[test]
fn usd_reports_probability_and_angle() {
    let (code, stdout, _) = run(&["usd", "--delta", "0.5"]);
    assert_eq!(code, 0, "all residuals within default tolerance");
    let prob_line = stdout
        .lines()
        .find(|l| l.starts_with("success probability = "))
        .expect("probability line present");
    let prob: f64 = prob_line.rsplit(' ').next().unwrap().parse().unwrap();
    assert!(
        (prob - 0.4).abs() <= 1e-12,
        "2 b^2 with b^2 = 0.2 at delta = 0.5: {prob_line}"
    );
    assert!(stdout.contains("four-block circuit reconstruction residual"));
    assert!(stdout.contains("circuit JSON:"));
    assert!(stdout.contains("closed form (direct)"));
    assert!(stdout.contains("closed form (coupler-conjugated)"));

    let (code, stdout, _) = run(&["usd", "--delta", "0.7071"]);
    assert_eq!(code, 0);
    assert!(
        stdout.contains("theta3 = atan(sqrt(1 - delta^2)/delta) = 0.785"),
        "angle near pi/4 at delta near 1/sqrt(2): {stdout}"
    );
}

#[test]
fn usd_rejects_out_of_range_delta() {
    let (code, _, stderr) = run(&["usd", "--delta", "1.5"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("delta"), "message names the offending flag: {stderr}");
    let (code, _, _) = run(&["usd", "--delta", "0"]);
    assert_eq!(code, 2);
}

#[test]
fn usd_written_circuit_verifies_against_discrimination_unitary() {
    let dir = tempfile::tempdir().unwrap();
    let circuit = dir.path().join("usd_circuit.json");
    let matrix = dir.path().join("usd_matrix.json");
    let p = lumesh::UsdParams::from_delta(0.6).unwrap();
    write(&matrix, &lumesh::usd_unitary(p).to_json().unwrap());
    let (code, _, _) = run(&[
        "usd",
        "--delta",
        "0.6",
        "--output",
        circuit.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let (code, _, _) = run(&[
        "verify",
        "--circuit",
        circuit.to_str().unwrap(),
        "--matrix",
        matrix.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "four-block circuit replays the discrimination unitary");
}

#[test]
fn usd_output_is_byte_deterministic() {
    let first = run(&["usd", "--delta", "0.3"]);
    let second = run(&["usd", "--delta", "0.3"]);
    assert_eq!(first, second);
}
