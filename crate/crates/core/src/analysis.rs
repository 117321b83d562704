//! Feasibility analysis for restricted interferometers, decomposition
//! verification, and component-count reporting across mesh schemes.

use crate::decompose::{
    decompose_bwc, decompose_clements, decompose_mbs3, decompose_reck, DecompositionResult,
};
use crate::matrix::{distance_up_to_global_phase, haar_random_unitary, PhaseEquivalence, UnitaryMatrix};
use crate::primitives::SmziParams;
use crate::{normalize_angle, Error, Result, FEASIBILITY_TOL};
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt::Write as _;

/// Why a feasibility check failed, with a numeric measure of the failure.
#[derive(Debug, Clone, PartialEq)]
pub struct Obstruction {
    /// Human-readable account of the violated condition.
    pub description: String,
    /// How far the matrix is from satisfying it (zero means satisfiable).
    pub residual: f64,
}

/// Outcome of a feasibility analysis.
#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityVerdict {
    /// Whether the operation is possible (or, for necessary-condition
    /// checks, not ruled out).
    pub feasible: bool,
    /// One-sentence explanation of the verdict.
    pub summary: String,
    /// Explicit phases achieving the operation, when one is constructed.
    pub witness: Option<SmziParams>,
    /// Present exactly when the verdict is infeasible.
    pub obstruction: Option<Obstruction>,
}

/// Replays the decomposition's circuit and measures its distance from u.
///
/// The distance is the max-entry deviation after optimal global-phase
/// alignment; callers compare it against their own tolerance.
pub fn verify_decomposition(
    u: &UnitaryMatrix,
    result: &DecompositionResult,
) -> Result<PhaseEquivalence> {
    if result.circuit.width() != u.dim() {
        return Err(Error::Dimension(format!(
            "circuit acts on {} modes but the matrix has {}",
            result.circuit.width(),
            u.dim()
        )));
    }
    let replayed = result.circuit.evaluate();
    distance_up_to_global_phase(replayed.inner(), u.inner())
}

/// Asks whether a symmetric two-phase interferometer on rows (m, m+1) can
/// zero the entry at `target` (1-based (row, col), row inside the pair).
///
/// The symmetric block mixes the pair entries as sums and differences, so a
/// zero exists iff |u_m - u_n| = |u_m + u_n| for the pair entries in the
/// target column. When it does, explicit phases are returned; when it does
/// not, the relative modulus mismatch is reported as the obstruction.
pub fn smzi_can_nullify(
    u: &crate::matrix::ComplexMatrix,
    target: (usize, usize),
    pair: (usize, usize),
) -> Result<FeasibilityVerdict> {
    let (m, n) = pair;
    let (tr, tc) = target;
    if n != m + 1 || m < 1 {
        return Err(Error::Index(format!(
            "pair must be adjacent modes (m, m+1), got ({m}, {n})"
        )));
    }
    if n > u.rows() {
        return Err(Error::Index(format!(
            "pair ({m}, {n}) outside a matrix with {} rows",
            u.rows()
        )));
    }
    if tc < 1 || tc > u.cols() {
        return Err(Error::Index(format!(
            "target column {tc} outside a matrix with {} columns",
            u.cols()
        )));
    }
    if tr != m && tr != n {
        return Err(Error::Index(format!(
            "target row {tr} must be one of the pair rows ({m}, {n})"
        )));
    }
    let um = u.get(m - 1, tc - 1);
    let un = u.get(n - 1, tc - 1);
    // Zeroing the lower row needs e^{i(p11 - p12)} = (um - un) / (um + un);
    // the upper row flips the numerator's sign.
    let num = if tr == n { um - un } else { un - um };
    let den = um + un;
    let scale = num.norm().max(den.norm());
    if scale < 1e-300 {
        return Ok(FeasibilityVerdict {
            feasible: true,
            summary: format!(
                "entry ({tr}, {tc}) is already zero along with its partner; the identity setting suffices"
            ),
            witness: Some(SmziParams::new(0.0, 0.0)?),
            obstruction: None,
        });
    }
    let mismatch = (num.norm() - den.norm()).abs() / scale;
    if mismatch <= FEASIBILITY_TOL {
        let phi11 = normalize_angle(num.arg() - den.arg());
        Ok(FeasibilityVerdict {
            feasible: true,
            summary: format!(
                "entry ({tr}, {tc}) can be zeroed: the pair entries' sum and difference have equal moduli, so a phase setting exists"
            ),
            witness: Some(SmziParams::new(phi11, 0.0)?),
            obstruction: None,
        })
    } else {
        Ok(FeasibilityVerdict {
            feasible: false,
            summary: format!(
                "entry ({tr}, {tc}) cannot be zeroed by a symmetric two-phase interferometer on modes ({m}, {n}): the pair entries' sum and difference differ in modulus by {mismatch:.3e} (relative)"
            ),
            witness: None,
            obstruction: Some(Obstruction {
                description: format!(
                    "a symmetric block only rephases the sum and difference of the pair entries, so zeroing entry ({tr}, {tc}) requires |u[{m},{tc}] - u[{n},{tc}]| = |u[{m},{tc}] + u[{n},{tc}]|"
                ),
                residual: mismatch,
            }),
        })
    }
}

/// Necessary-condition check for writing a 3x3 unitary as three tritters
/// interleaved with phase masks.
///
/// Phase masks never change entry moduli, so after undoing the output-side
/// 50:50 coupler on modes (1, 2) the first row must have equal moduli in
/// columns 2 and 3. Passing this check does not certify a factorization;
/// failing it rules one out.
pub fn three_tritter_feasible(u: &UnitaryMatrix) -> Result<FeasibilityVerdict> {
    if u.dim() != 3 {
        return Err(Error::Dimension(format!(
            "the three-tritter check applies to 3x3 unitaries, got {0}x{0}",
            u.dim()
        )));
    }
    let r: Vec<f64> = (0..3)
        .map(|c| ((u.get(0, c) + u.get(1, c)) * FRAC_1_SQRT_2).norm())
        .collect();
    let residual = (r[1] - r[2]).abs();
    if residual <= FEASIBILITY_TOL {
        Ok(FeasibilityVerdict {
            feasible: true,
            summary: "passes the necessary condition for a three-tritter factorization (the condition is not sufficient, so no construction is implied)".into(),
            witness: None,
            obstruction: None,
        })
    } else {
        Ok(FeasibilityVerdict {
            feasible: false,
            summary: format!(
                "fails the necessary condition for a three-tritter factorization: after undoing the final 50:50 coupler the first-row moduli in columns 2 and 3 differ by {residual:.3e}"
            ),
            witness: None,
            obstruction: Some(Obstruction {
                description: "phase masks preserve entry moduli, so any three-tritter product forces equal first-row moduli in columns 2 and 3 after the final coupler is undone".into(),
                residual,
            }),
        })
    }
}

/// One row of the component-count report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalingRow {
    /// Mode count.
    pub n: usize,
    /// Scheme label.
    pub scheme: String,
    /// Standalone 50:50 beamsplitters.
    pub n_bs: usize,
    /// Tunable phase shifters (standalone plus non-trivial mask entries).
    pub n_ps: usize,
    /// Phase-mask layers.
    pub n_phase_masks: usize,
    /// Fixed multiport blocks.
    pub n_fixed_mbs: usize,
}

/// Component counts per scheme over a range of mode counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalingReport {
    /// Rows grouped by mode count, schemes in a fixed order within each.
    pub rows: Vec<ScalingRow>,
}

impl ScalingReport {
    /// Renders an aligned text table.
    pub fn to_table(&self) -> String {
        let headers = ["N", "scheme", "n_bs", "n_ps", "n_phase_masks", "n_fixed_mbs"];
        let cells: Vec<[String; 6]> = self
            .rows
            .iter()
            .map(|r| {
                [
                    r.n.to_string(),
                    r.scheme.clone(),
                    r.n_bs.to_string(),
                    r.n_ps.to_string(),
                    r.n_phase_masks.to_string(),
                    r.n_fixed_mbs.to_string(),
                ]
            })
            .collect();
        let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
        for row in &cells {
            for (w, cell) in widths.iter_mut().zip(row.iter()) {
                *w = (*w).max(cell.len());
            }
        }
        let mut out = String::new();
        for (i, h) in headers.iter().enumerate() {
            if i > 0 {
                out.push_str("  ");
            }
            if i == 1 {
                let _ = write!(out, "{h:<width$}", width = widths[i]);
            } else {
                let _ = write!(out, "{h:>width$}", width = widths[i]);
            }
        }
        out.push('\n');
        for row in &cells {
            for (i, cell) in row.iter().enumerate() {
                if i > 0 {
                    out.push_str("  ");
                }
                if i == 1 {
                    let _ = write!(out, "{cell:<width$}", width = widths[i]);
                } else {
                    let _ = write!(out, "{cell:>width$}", width = widths[i]);
                }
            }
            out.push('\n');
        }
        out
    }

    /// Renders CSV with a fixed header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("N,scheme,n_bs,n_ps,n_phase_masks,n_fixed_mbs\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                r.n, r.scheme, r.n_bs, r.n_ps, r.n_phase_masks, r.n_fixed_mbs
            );
        }
        out
    }
}

fn report_row(n: usize, result: &DecompositionResult) -> ScalingRow {
    let counts = result.circuit.count_components(&result.scheme);
    ScalingRow {
        n,
        scheme: counts.scheme,
        n_bs: counts.n_bs,
        n_ps: counts.n_ps,
        n_phase_masks: counts.n_phase_masks,
        n_fixed_mbs: counts.n_fixed_mbs,
    }
}

fn check_row(row: &ScalingRow) -> Result<()> {
    let n = row.n;
    let ok = match row.scheme.as_str() {
        "reck" | "clements" => {
            row.n_bs == n * (n - 1) && row.n_ps == n * n && row.n_fixed_mbs == 0
        }
        "mbs3" => row.n_fixed_mbs == 4 && row.n_bs == 0 && row.n_phase_masks == 5,
        "bwc" => {
            row.n_fixed_mbs == n - 1 && row.n_bs == n - 1 && row.n_phase_masks <= n + 2
        }
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Structure(format!(
            "component counts for scheme {} at N={} violate the expected totals: \
             n_bs={}, n_ps={}, n_phase_masks={}, n_fixed_mbs={}",
            row.scheme, n, row.n_bs, row.n_ps, row.n_phase_masks, row.n_fixed_mbs
        )))
    }
}

/// Component counts for one random unitary per mode count, seeded at 7.
pub fn scaling_report(n_min: usize, n_max: usize) -> Result<ScalingReport> {
    scaling_report_with_seed(n_min, n_max, 7)
}

/// Component counts for one random unitary per mode count.
///
/// Each mode count N draws a Haar-random unitary from `base_seed + N` and
/// decomposes it with every applicable scheme (triangular and rectangular
/// always; the four-block scheme at N = 3; the multiport mesh for N >= 3).
/// Every row is checked against the scheme's exact component totals and an
/// error is returned on any mismatch.
pub fn scaling_report_with_seed(
    n_min: usize,
    n_max: usize,
    base_seed: u64,
) -> Result<ScalingReport> {
    if n_min < 1 || n_max < n_min {
        return Err(Error::InvalidArgument(format!(
            "mode range must satisfy 1 <= min <= max, got {n_min}..={n_max}"
        )));
    }
    let mut rows = Vec::new();
    for n in n_min..=n_max {
        let u = haar_random_unitary(n, base_seed.wrapping_add(n as u64))?;
        rows.push(report_row(n, &decompose_reck(&u)?));
        rows.push(report_row(n, &decompose_clements(&u)?));
        if n == 3 {
            let (_, result) = decompose_mbs3(&u)?;
            rows.push(report_row(n, &result));
        }
        if n >= 3 {
            rows.push(report_row(n, &decompose_bwc(&u)?));
        }
    }
    for row in &rows {
        check_row(row)?;
    }
    Ok(ScalingReport { rows })
}
