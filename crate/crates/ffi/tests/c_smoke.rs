//! Compiles tests/smoke.c against the generated header, links the static
//! library, runs the binary, and checks it exits cleanly.

use std::path::{Path, PathBuf};
use std::process::Command;

fn find_compiler() -> Option<&'static str> {
    for candidate in ["cc", "gcc", "clang"] {
        if Command::new(candidate).arg("--version").output().is_ok() {
            return Some(candidate);
        }
    }
    None
}

/// target/<profile> for the build that produced this test binary.
fn artifact_dir() -> PathBuf {
    let profile = if cfg!(debug_assertions) { "debug" } else { "release" };
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../target")
        .join(profile)
}

#[test]
fn c_program_builds_and_runs_against_the_header() {
    let Some(compiler) = find_compiler() else {
        eprintln!("skipping: no C compiler on PATH");
        return;
    };

    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let staticlib = artifact_dir().join("liblumesh_ffi.a");
    assert!(
        staticlib.exists(),
        "static library missing at {}; build the crate first",
        staticlib.display()
    );

    let dir = tempfile::tempdir().expect("temp dir");
    let binary = dir.path().join("smoke");
    let compile = Command::new(compiler)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg(manifest.join("tests/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&staticlib)
        .args(["-lpthread", "-ldl", "-lm"])
        .arg("-o")
        .arg(&binary)
        .output()
        .expect("compiler should spawn");
    assert!(
        compile.status.success(),
        "C compilation failed:\n{}",
        String::from_utf8_lossy(&compile.stderr)
    );

    let run = Command::new(&binary).output().expect("smoke binary should spawn");
    assert!(
        run.status.success(),
        "smoke binary exited with {:?}\nstdout: {}\nstderr: {}",
        run.status.code(),
        String::from_utf8_lossy(&run.stdout),
        String::from_utf8_lossy(&run.stderr)
    );
    let stdout = String::from_utf8_lossy(&run.stdout);
    assert!(stdout.starts_with("ok "), "unexpected output: {stdout}");
}
