//! Golden-file tests: committed circuit JSON produced by earlier runs must
//! keep replaying to the committed matrices, and the current code must keep
//! emitting byte-identical JSON for those inputs. Regenerate the files with
//! `UPDATE_GOLDEN=1 cargo test -p lumesh --test golden` after an intentional
//! format or algorithm change.

use lumesh::{
    decompose_bwc, decompose_clements, decompose_mbs3, distance_up_to_global_phase,
    haar_random_unitary, Circuit, ComplexMatrix, UnitaryMatrix,
};
use std::fs;
use std::path::{Path, PathBuf};

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn read(path: &Path) -> String {
    fs::read_to_string(path)
        .unwrap_or_else(|e| panic!("golden file {} missing: {e}", path.display()))
}

struct GoldenCase {
    matrix_file: &'static str,
    circuit_file: &'static str,
    seed: u64,
    modes: usize,
    scheme: &'static str,
}

const CASES: [GoldenCase; 3] = [
    GoldenCase {
        matrix_file: "mbs3_n3_matrix.json",
        circuit_file: "mbs3_n3_circuit.json",
        seed: 20260816,
        modes: 3,
        scheme: "mbs3",
    },
    GoldenCase {
        matrix_file: "clements_n4_matrix.json",
        circuit_file: "clements_n4_circuit.json",
        seed: 31,
        modes: 4,
        scheme: "clements",
    },
    GoldenCase {
        matrix_file: "bwc_n5_matrix.json",
        circuit_file: "bwc_n5_circuit.json",
        seed: 47,
        modes: 5,
        scheme: "bwc",
    },
];

fn decompose(scheme: &str, u: &UnitaryMatrix) -> Circuit {
    match scheme {
        "mbs3" => decompose_mbs3(u).unwrap().1.circuit,
        "clements" => decompose_clements(u).unwrap().circuit,
        "bwc" => decompose_bwc(u).unwrap().circuit,
        other => panic!("unknown scheme {other}"),
    }
}

#[test]
fn golden_circuits_replay_and_regenerate_identically() {
    let dir = golden_dir();
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::create_dir_all(&dir).unwrap();
        for case in &CASES {
            let u = haar_random_unitary(case.modes, case.seed).unwrap();
            let circuit = decompose(case.scheme, &u);
            fs::write(dir.join(case.matrix_file), u.to_json().unwrap()).unwrap();
            fs::write(dir.join(case.circuit_file), circuit.to_json().unwrap()).unwrap();
        }
    }
    for case in &CASES {
        let matrix_text = read(&dir.join(case.matrix_file));
        let circuit_text = read(&dir.join(case.circuit_file));
        let u = UnitaryMatrix::new(ComplexMatrix::from_json(&matrix_text).unwrap()).unwrap();
        let circuit = Circuit::from_json(&circuit_text).unwrap();
        assert_eq!(circuit.width(), case.modes);

        // The committed circuit still reproduces the committed matrix.
        let d = distance_up_to_global_phase(circuit.evaluate().inner(), u.inner())
            .unwrap()
            .distance;
        assert!(
            d <= 1e-8,
            "{}: committed circuit drifted from its matrix by {d:.3e}",
            case.scheme
        );

        // The current decomposition still emits those exact bytes, so any
        // unintended numeric or format drift fails loudly here.
        let fresh = decompose(case.scheme, &u);
        assert_eq!(
            fresh.to_json().unwrap(),
            circuit_text,
            "{}: regenerated circuit JSON must be byte-identical",
            case.scheme
        );

        // And the committed matrix bytes are what the library writes today.
        assert_eq!(
            u.to_json().unwrap(),
            matrix_text,
            "{}: matrix JSON must round-trip byte-identically",
            case.scheme
        );
    }
}
