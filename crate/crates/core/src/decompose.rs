//! Decomposition of unitaries into two-mode block meshes: triangular and
//! rectangular sweeps, the four-identical-block scheme on three modes, and the
//! multiport-beamsplitter mesh with phase masks.

use crate::circuit::{Circuit, Element};
use crate::matrix::{embed_block, ComplexMatrix, UnitaryMatrix};
use crate::normalize_angle;
use crate::primitives::{bs_matrix, fixed_tritter_block, AmziParams, BsRatio, DiagPhases};
use crate::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::FRAC_PI_2;

/// Which two-mode matrix a block entry refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockFlavor {
    /// Both phase shifters on the first mode.
    T,
    /// Both phase shifters on the second mode.
    TTilde,
    /// Symmetric MZI with two internal phases.
    Smzi,
}

/// One two-mode block of a decomposition, on 1-based modes (m, n).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoModeBlock {
    /// Upper mode.
    pub m: usize,
    /// Lower mode (always m + 1 for the meshes produced here).
    pub n: usize,
    /// Mixing angle.
    pub theta: f64,
    /// Phase angle.
    pub phi: f64,
    /// Which two-mode matrix the angles parameterize.
    pub flavor: BlockFlavor,
}

/// A completed decomposition: factored blocks, output phases, and the circuit.
///
/// The blocks are listed in application order; the diagonal phase layer acts
/// last. Rebuilding that product reproduces the source unitary up to a global
/// phase, as does replaying `circuit`.
#[derive(Debug, Clone)]
pub struct DecompositionResult {
    /// Scheme label: "reck", "clements", "mbs3", or "bwc".
    pub scheme: String,
    /// Two-mode blocks in application order.
    pub blocks: Vec<TwoModeBlock>,
    /// Output diagonal phases (factor-2 convention).
    pub diag: DiagPhases,
    /// The physical circuit realizing the unitary.
    pub circuit: Circuit,
}

/// Parameter set of the four-block scheme on three modes; mu1 is fixed to 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mbs3Params {
    /// Mixing angle of the second block.
    pub mu2: f64,
    /// Mixing angle of the third block.
    pub mu3: f64,
    /// Mixing angle of the fourth block.
    pub mu4: f64,
    /// Phase angle entering with mu2.
    pub nu1: f64,
    /// Phase angle entering with mu3.
    pub nu2: f64,
    /// Phase angle entering with mu4.
    pub nu3: f64,
    /// Output phase on mode 3.
    pub nu4: f64,
    /// Output phase on mode 1.
    pub delta1: f64,
}

impl Mbs3Params {
    /// The first mixing angle, fixed to zero by convention.
    pub fn mu1(&self) -> f64 {
        0.0
    }
}

/// Which side a nullifying block multiplies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// T is applied to the left of the matrix (row operation).
    Left,
    /// The inverse of T is applied to the right (column operation).
    Right,
}

/// Solves for the (theta, phi) zeroing one entry of u.
///
/// All indices are 1-based; the pair must be adjacent modes (m, m+1). For
/// `Side::Left` the block acts on rows and the target sits in one of them;
/// for `Side::Right` the inverse block acts on columns. Already-zero targets
/// return (0, 0).
pub fn nullification_angles(
    u: &ComplexMatrix,
    target_row: usize,
    target_col: usize,
    side: Side,
    pair: (usize, usize),
) -> Result<AmziParams> {
    let (m, n) = pair;
    if n != m + 1 || m < 1 {
        return Err(Error::Index(format!(
            "pair must be adjacent modes (m, m+1), got ({m}, {n})"
        )));
    }
    if target_row < 1 || target_row > u.rows() || target_col < 1 || target_col > u.cols() {
        return Err(Error::Index(format!(
            "target ({target_row}, {target_col}) outside a {}x{} matrix",
            u.rows(),
            u.cols()
        )));
    }
    match side {
        Side::Left => {
            if target_row != m && target_row != n {
                return Err(Error::Index(format!(
                    "left-side target row {target_row} must be one of the pair rows ({m}, {n})"
                )));
            }
        }
        Side::Right => {
            if target_col != m && target_col != n {
                return Err(Error::Index(format!(
                    "right-side target column {target_col} must be one of the pair columns ({m}, {n})"
                )));
            }
        }
    }
    if n > u.rows() || n > u.cols() {
        return Err(Error::Index(format!(
            "pair ({m}, {n}) outside a {}x{} matrix",
            u.rows(),
            u.cols()
        )));
    }
    let (theta, phi) = nullification_angles_zero_based(
        u,
        target_row - 1,
        target_col - 1,
        side,
        m - 1,
    );
    AmziParams::new(theta, phi)
}

/// Core angle solver on 0-based indices; pair is (m0, m0 + 1).
fn nullification_angles_zero_based(
    u: &ComplexMatrix,
    tr: usize,
    tc: usize,
    side: Side,
    m0: usize,
) -> (f64, f64) {
    let n0 = m0 + 1;
    let (big, small, sign) = match side {
        Side::Left => {
            let um = u.get(m0, tc);
            let un = u.get(n0, tc);
            if tr == n0 {
                // Zero the lower row: 2 phi = pi/2 + arg(u_n) - arg(u_m).
                (um, un, 1.0)
            } else {
                // Zero the upper row: 2 phi = -pi/2 + arg(u_n) - arg(u_m).
                (um, un, -1.0)
            }
        }
        Side::Right => {
            let um = u.get(tr, m0);
            let un = u.get(tr, n0);
            if tc == m0 {
                // Zero the left column: 2 phi = arg(u_m) - arg(u_n) - pi/2.
                (um, un, -1.0)
            } else {
                // Zero the right column: 2 phi = pi/2 + arg(u_m) - arg(u_n).
                (um, un, 1.0)
            }
        }
    };
    let (target, pivot, phase_diff) = match side {
        Side::Left => {
            let (um, un) = (big, small);
            if tr == n0 {
                (un, um, un.arg() - um.arg())
            } else {
                (um, un, un.arg() - um.arg())
            }
        }
        Side::Right => {
            let (um, un) = (big, small);
            if tc == m0 {
                (um, un, um.arg() - un.arg())
            } else {
                (un, um, um.arg() - un.arg())
            }
        }
    };
    if target.norm() <= 1e-12 {
        return (0.0, 0.0);
    }
    if pivot.norm() <= 1e-300 {
        // Degenerate pivot: a quarter-turn moves the whole amplitude across.
        return (FRAC_PI_2, 0.0);
    }
    let theta = target.norm().atan2(pivot.norm());
    let phi = normalize_angle(0.5 * (sign * FRAC_PI_2 + phase_diff));
    (theta, phi)
}

/// Left-multiplies the block T(theta, phi) on rows (m0, m0+1) in place.
fn apply_t_left(u: &mut ComplexMatrix, m0: usize, theta: f64, phi: f64) {
    let g = Complex64::cis(theta);
    let e = Complex64::cis(2.0 * phi);
    let (s, co) = theta.sin_cos();
    let i = Complex64::new(0.0, 1.0);
    let (t00, t01) = (g * e * co, g * i * s);
    let (t10, t11) = (g * i * e * s, g * co);
    for col in 0..u.cols() {
        let a = u.get(m0, col);
        let b = u.get(m0 + 1, col);
        u.set(m0, col, t00 * a + t01 * b);
        u.set(m0 + 1, col, t10 * a + t11 * b);
    }
}

/// Right-multiplies the inverse of T(theta, phi) on columns (m0, m0+1) in
/// place.
fn apply_t_inv_right(u: &mut ComplexMatrix, m0: usize, theta: f64, phi: f64) {
    let g = Complex64::cis(theta);
    let e = Complex64::cis(2.0 * phi);
    let (s, co) = theta.sin_cos();
    let i = Complex64::new(0.0, 1.0);
    let (t00, t01) = (g * e * co, g * i * s);
    let (t10, t11) = (g * i * e * s, g * co);
    // u * T^dagger: new col m = a conj(t00) + b conj(t01), etc.
    for row in 0..u.rows() {
        let a = u.get(row, m0);
        let b = u.get(row, m0 + 1);
        u.set(row, m0, a * t00.conj() + b * t01.conj());
        u.set(row, m0 + 1, a * t10.conj() + b * t11.conj());
    }
}

/// One factor of a mesh: pair (m0, m0+1) 0-based plus angles, application
/// order.
#[derive(Debug, Clone, Copy)]
struct Factor {
    m0: usize,
    theta: f64,
    phi: f64,
}

/// Rectangular-sweep factorization: returns factors in application order plus
/// the output diagonal angles (second entry normalized to zero for N >= 2).
fn clements_factors(u: &ComplexMatrix) -> (Vec<Factor>, Vec<f64>) {
    let n = u.rows();
    let mut work = u.clone();
    let mut rights: Vec<Factor> = Vec::new();
    let mut lefts: Vec<Factor> = Vec::new();
    for i in 1..n {
        if i % 2 == 1 {
            for j in 0..i {
                let tr = n - 1 - j;
                let tc = i - 1 - j;
                let m0 = i - 1 - j;
                let (theta, phi) = if work.get(tr, tc).norm() <= 1e-14 {
                    (0.0, 0.0)
                } else {
                    nullification_angles_zero_based(&work, tr, tc, Side::Right, m0)
                };
                apply_t_inv_right(&mut work, m0, theta, phi);
                rights.push(Factor { m0, theta, phi });
            }
        } else {
            for j in 1..=i {
                let tr = n + j - i - 1;
                let tc = j - 1;
                let m0 = n + j - i - 2;
                let (theta, phi) = if work.get(tr, tc).norm() <= 1e-14 {
                    (0.0, 0.0)
                } else {
                    nullification_angles_zero_based(&work, tr, tc, Side::Left, m0)
                };
                apply_t_left(&mut work, m0, theta, phi);
                lefts.push(Factor { m0, theta, phi });
            }
        }
    }
    let mut ds: Vec<f64> = (0..n).map(|k| work.get(k, k).arg() / 2.0).collect();
    // Move the accumulated left factors to the other side of the diagonal:
    // T^{-1}(theta, phi) D(d_m, d_n) = D(d_n - phi, d_n) T(-theta, d_m - d_n),
    // converting the factor nearest the diagonal (the last emitted) first.
    let mut converted: Vec<Factor> = Vec::with_capacity(lefts.len());
    for f in lefts.iter().rev() {
        let dm = ds[f.m0];
        let dn = ds[f.m0 + 1];
        converted.push(Factor {
            m0: f.m0,
            theta: -f.theta,
            phi: dm - dn,
        });
        ds[f.m0] = dn - f.phi;
    }
    let mut order = rights;
    order.extend(converted);
    let pivot = if n >= 2 { ds[1] } else { ds[0] };
    for d in &mut ds {
        *d = normalize_angle(*d - pivot);
    }
    (order, ds)
}

/// Triangular-sweep factorization: right-side column operations only.
fn reck_factors(u: &ComplexMatrix) -> (Vec<Factor>, Vec<f64>) {
    let n = u.rows();
    let mut work = u.clone();
    let mut rights: Vec<Factor> = Vec::new();
    for r in (1..n).rev() {
        for c0 in 0..r {
            let (theta, phi) = if work.get(r, c0).norm() <= 1e-14 {
                (0.0, 0.0)
            } else {
                nullification_angles_zero_based(&work, r, c0, Side::Right, c0)
            };
            apply_t_inv_right(&mut work, c0, theta, phi);
            rights.push(Factor { m0: c0, theta, phi });
        }
    }
    let mut ds: Vec<f64> = (0..n).map(|k| work.get(k, k).arg() / 2.0).collect();
    let pivot = ds[n - 1];
    for d in &mut ds {
        *d = normalize_angle(*d - pivot);
    }
    (rights, ds)
}

fn factors_to_blocks(factors: &[Factor]) -> Vec<TwoModeBlock> {
    factors
        .iter()
        .map(|f| TwoModeBlock {
            m: f.m0 + 1,
            n: f.m0 + 2,
            theta: normalize_angle(f.theta),
            phi: normalize_angle(f.phi),
            flavor: BlockFlavor::T,
        })
        .collect()
}

/// Expands T-factors plus a diagonal into phase shifters and 50:50
/// beamsplitters: per factor PS(2 phi), BS, PS(2 theta), BS on the upper
/// mode, then one shifter per mode for the diagonal.
fn mesh_circuit(n: usize, factors: &[Factor], ds: &[f64]) -> Result<Circuit> {
    let mut elements = Vec::with_capacity(4 * factors.len() + n);
    for f in factors {
        let mode = f.m0 + 1;
        elements.push(Element::PhaseShifter {
            mode,
            phase: normalize_angle(2.0 * f.phi),
        });
        elements.push(Element::Beamsplitter {
            mode,
            eta: BsRatio::half(),
        });
        elements.push(Element::PhaseShifter {
            mode,
            phase: normalize_angle(2.0 * f.theta),
        });
        elements.push(Element::Beamsplitter {
            mode,
            eta: BsRatio::half(),
        });
    }
    for (k, d) in ds.iter().enumerate() {
        elements.push(Element::PhaseShifter {
            mode: k + 1,
            phase: normalize_angle(2.0 * d),
        });
    }
    Circuit::new(n, elements)
}

/// Triangular mesh: nullifies row N, then row N-1, and so on, using column
/// operations; N(N-1)/2 blocks plus the output diagonal.
pub fn decompose_reck(u: &UnitaryMatrix) -> Result<DecompositionResult> {
    let n = u.dim();
    let (factors, ds) = reck_factors(u.inner());
    Ok(DecompositionResult {
        scheme: "reck".into(),
        blocks: factors_to_blocks(&factors),
        diag: DiagPhases::new(ds.clone())?,
        circuit: mesh_circuit(n, &factors, &ds)?,
    })
}

/// Rectangular mesh: alternates column and row operations along
/// anti-diagonals, balancing depth across modes; N(N-1)/2 blocks plus the
/// output diagonal.
pub fn decompose_clements(u: &UnitaryMatrix) -> Result<DecompositionResult> {
    let n = u.dim();
    let (factors, ds) = clements_factors(u.inner());
    Ok(DecompositionResult {
        scheme: "clements".into(),
        blocks: factors_to_blocks(&factors),
        diag: DiagPhases::new(ds.clone())?,
        circuit: mesh_circuit(n, &factors, &ds)?,
    })
}

/// Two-mode special case: u = global phase * D_2(phi2, 0) T(theta1, phi1).
pub fn decompose_u2(u: &UnitaryMatrix) -> Result<DecompositionResult> {
    if u.dim() != 2 {
        return Err(Error::Dimension(format!(
            "two-mode decomposition requires a 2x2 matrix, got {0}x{0}",
            u.dim()
        )));
    }
    decompose_clements(u)
}

/// Rebuilds the matrix product of a block list followed by the diagonal.
pub fn rebuild_blocks(
    n: usize,
    blocks: &[TwoModeBlock],
    diag: &DiagPhases,
) -> Result<ComplexMatrix> {
    use crate::primitives::{diag_matrix, t_matrix, t_tilde_matrix};
    let mut acc = ComplexMatrix::identity(n);
    for b in blocks {
        let p = AmziParams::new(b.theta, b.phi)?;
        let two = match b.flavor {
            BlockFlavor::T => t_matrix(p),
            BlockFlavor::TTilde => t_tilde_matrix(p),
            BlockFlavor::Smzi => {
                crate::primitives::smzi_matrix(crate::primitives::SmziParams::new(b.theta, b.phi)?)
            }
        };
        acc = embed_block(n, two.inner(), b.m, b.n)?.mul(&acc)?;
    }
    diag_matrix(diag).mul(&acc)
}

/// Splits a three-mode rectangular factorization into the named angle set
/// (mu2, nu1, mu3, nu2, mu4, nu3, delta1, nu4).
fn mbs3_params_from(u: &ComplexMatrix) -> Result<Mbs3Params> {
    let (factors, ds) = clements_factors(u);
    if factors.len() != 3 || factors[0].m0 != 0 || factors[1].m0 != 1 || factors[2].m0 != 0 {
        return Err(Error::Structure(
            "three-mode factorization did not produce the (1,2),(2,3),(1,2) shape".into(),
        ));
    }
    let (e, f) = (factors[0].theta, factors[0].phi);
    let (c, d) = (factors[1].theta, factors[1].phi);
    let (a, b) = (factors[2].theta, factors[2].phi);
    // The middle factor converts to the second-mode form via
    // T(c,d) = e^{2i(c+d)} Ttilde(-c,-d); commuting the block scalar through
    // the last factor shifts its phase angle by -(c+d).
    Ok(Mbs3Params {
        mu2: normalize_angle(e),
        nu1: normalize_angle(f),
        mu3: normalize_angle(-c),
        nu2: normalize_angle(-d),
        mu4: normalize_angle(a),
        nu3: normalize_angle(b - (c + d)),
        delta1: normalize_angle(ds[0]),
        nu4: normalize_angle(ds[2]),
    })
}

/// Four-identical-block scheme on three modes.
///
/// Returns the named parameters of the factorization of u itself, plus a
/// circuit of exactly four identical fixed blocks (the phase-free tritter
/// block, alternately flipped) interleaved with five phase masks. The mask
/// angles come from factorizing B_23 u B_23, which absorbs the two boundary
/// beamsplitters into the outer blocks.
pub fn decompose_mbs3(u: &UnitaryMatrix) -> Result<(Mbs3Params, DecompositionResult)> {
    if u.dim() != 3 {
        return Err(Error::Dimension(format!(
            "the four-block scheme is defined on 3 modes, got {}",
            u.dim()
        )));
    }
    let params = mbs3_params_from(u.inner())?;

    let b23 = embed_block(3, bs_matrix(BsRatio::half()).inner(), 2, 3)?;
    let conjugated = b23.mul(u.inner())?.mul(&b23)?;
    let p = mbs3_params_from(&conjugated)?;

    let mask = |a: f64, b: f64, c: f64| Element::PhaseMask {
        phases: vec![
            normalize_angle(a),
            normalize_angle(b),
            normalize_angle(c),
        ],
    };
    let block = |reversed: bool| Element::FixedBlock {
        first_mode: 1,
        tag: "tritter".into(),
        matrix: fixed_tritter_block(),
        reversed,
    };
    let elements = vec![
        mask(2.0 * p.nu1, 0.0, 0.0),
        block(true),
        mask(2.0 * p.mu2, 0.0, 2.0 * p.nu2),
        block(false),
        mask(2.0 * p.nu3, 0.0, 2.0 * p.mu3),
        block(true),
        mask(2.0 * p.mu4, 0.0, 2.0 * p.nu4),
        block(false),
        mask(2.0 * p.delta1, 0.0, 0.0),
    ];
    let circuit = Circuit::new(3, elements)?;

    let blocks = vec![
        TwoModeBlock {
            m: 1,
            n: 2,
            theta: params.mu2,
            phi: params.nu1,
            flavor: BlockFlavor::T,
        },
        TwoModeBlock {
            m: 2,
            n: 3,
            theta: params.mu3,
            phi: params.nu2,
            flavor: BlockFlavor::TTilde,
        },
        TwoModeBlock {
            m: 1,
            n: 2,
            theta: params.mu4,
            phi: params.nu3,
            flavor: BlockFlavor::T,
        },
    ];
    let result = DecompositionResult {
        scheme: "mbs3".into(),
        blocks,
        diag: DiagPhases::new(vec![params.delta1, 0.0, params.nu4])?,
        circuit,
    };
    Ok((params, result))
}

/// Multiport-beamsplitter mesh for N >= 3.
///
/// Schedules the rectangular factorization into N full columns of symmetric
/// MZIs, sweeps every external phase into masks (diagonal phases commute
/// through a 50:50 layer whenever they are constant on its coupled pairs),
/// and merges interior beamsplitter layers pairwise into N-1 identical fixed
/// blocks; the boundary layers remain as N-1 standalone beamsplitters and at
/// most N+2 masks survive.
pub fn decompose_bwc(u: &UnitaryMatrix) -> Result<DecompositionResult> {
    let n = u.dim();
    if n < 3 {
        return Err(Error::Dimension(format!(
            "the multiport mesh requires at least 3 modes, got {n}"
        )));
    }
    let (factors, ds) = clements_factors(u.inner());

    // Schedule factors into columns: column c hosts the pairs with
    // m0 % 2 == c % 2, and a factor lands in the earliest parity-compatible
    // column after everything already scheduled on its modes.
    let mut columns: Vec<Vec<Factor>> = vec![Vec::new(); n];
    let mut available = vec![0usize; n];
    for f in &factors {
        let mut col = available[f.m0].max(available[f.m0 + 1]);
        if col % 2 != f.m0 % 2 {
            col += 1;
        }
        if col >= n {
            return Err(Error::Structure(format!(
                "mesh schedule overflowed {n} columns at pair ({}, {})",
                f.m0 + 1,
                f.m0 + 2
            )));
        }
        columns[col].push(*f);
        available[f.m0] = col + 1;
        available[f.m0 + 1] = col + 1;
    }
    for (c, col) in columns.iter().enumerate() {
        let expected: Vec<usize> = (0..n - 1).filter(|m| m % 2 == c % 2).collect();
        let mut got: Vec<usize> = col.iter().map(|f| f.m0).collect();
        got.sort_unstable();
        if got != expected {
            return Err(Error::Structure(format!(
                "mesh column {c} is not full: pairs {got:?}, expected {expected:?}"
            )));
        }
    }

    // Masks between beamsplitter layers: index 2c before column c's first
    // layer (external phases), 2c+1 between its layers (internal phases),
    // 2n for the output diagonal.
    let mut masks: Vec<Vec<f64>> = vec![vec![0.0; n]; 2 * n + 1];
    for (c, col) in columns.iter().enumerate() {
        for f in col {
            masks[2 * c][f.m0] += 2.0 * f.phi;
            masks[2 * c + 1][f.m0] += 2.0 * f.theta;
        }
    }
    for (k, d) in ds.iter().enumerate() {
        masks[2 * n][k] += 2.0 * d;
    }

    // Clear every even mask strictly inside the mesh by splitting it into a
    // part constant on the next layer's pairs (pushed forward) and a part
    // constant on the previous layer's pairs (pushed backward).
    let pairs_of = |c: usize| -> Vec<bool> {
        let mut inside = vec![false; n];
        for m in (c % 2..n.saturating_sub(1)).step_by(2) {
            inside[m] = true;
        }
        inside
    };
    for k in 1..n {
        let x = masks[2 * k].clone();
        let next_pairs = pairs_of(k);
        let prev_pairs = pairs_of(k - 1);
        let mut fwd = vec![0.0; n];
        let mut bwd = vec![0.0; n];
        for mode in 0..n {
            if mode >= 1 && next_pairs[mode - 1] {
                fwd[mode] = fwd[mode - 1];
                bwd[mode] = x[mode] - fwd[mode];
            } else if mode >= 1 && prev_pairs[mode - 1] {
                bwd[mode] = bwd[mode - 1];
                fwd[mode] = x[mode] - bwd[mode];
            } else {
                bwd[mode] = 0.0;
                fwd[mode] = x[mode];
            }
        }
        for mode in 0..n {
            masks[2 * k][mode] = 0.0;
            masks[2 * k + 1][mode] += fwd[mode];
            masks[2 * k - 1][mode] += bwd[mode];
        }
    }

    // The canonical fixed block: a full odd-pair layer followed by a full
    // even-pair layer of 50:50 beamsplitters. Both layers are real symmetric,
    // so the opposite stacking is exactly the transpose.
    let layer = |parity: usize| -> Result<ComplexMatrix> {
        let mut acc = ComplexMatrix::identity(n);
        for m in (parity..n - 1).step_by(2) {
            acc = embed_block(n, bs_matrix(BsRatio::half()).inner(), m + 1, m + 2)?.mul(&acc)?;
        }
        Ok(acc)
    };
    let canonical = UnitaryMatrix::new_unchecked(layer(1)?.mul(&layer(0)?)?);

    let mask_el = |phases: &[f64]| Element::PhaseMask {
        phases: phases.iter().map(|p| normalize_angle(*p)).collect(),
    };
    let bs_layer_els = |parity: usize| -> Vec<Element> {
        (parity..n - 1)
            .step_by(2)
            .map(|m| Element::Beamsplitter {
                mode: m + 1,
                eta: BsRatio::half(),
            })
            .collect()
    };

    let mut elements = Vec::new();
    elements.push(mask_el(&masks[0]));
    elements.extend(bs_layer_els(0));
    elements.push(mask_el(&masks[1]));
    for k in 1..n {
        elements.push(Element::FixedBlock {
            first_mode: 1,
            tag: "mbs".into(),
            matrix: canonical.clone(),
            reversed: k % 2 == 0,
        });
        elements.push(mask_el(&masks[2 * k + 1]));
    }
    elements.extend(bs_layer_els((n - 1) % 2));
    elements.push(mask_el(&masks[2 * n]));
    let circuit = Circuit::new(n, elements)?;

    Ok(DecompositionResult {
        scheme: "bwc".into(),
        blocks: factors_to_blocks(&factors),
        diag: DiagPhases::new(ds)?,
        circuit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{distance_up_to_global_phase, haar_random_unitary};
    use crate::primitives::tritter_matrix;

    fn roundtrip(u: &UnitaryMatrix, result: &DecompositionResult) -> f64 {
        distance_up_to_global_phase(result.circuit.evaluate().inner(), u.inner())
            .unwrap()
            .distance
    }

    #[test]
    fn nullification_zeroes_all_four_cases() {
        let u = haar_random_unitary(5, 41).unwrap();
        for m in 1..5usize {
            let p = nullification_angles(u.inner(), m + 1, 3, Side::Left, (m, m + 1)).unwrap();
            let mut w = u.inner().clone();
            apply_t_left(&mut w, m - 1, p.theta, p.phi);
            assert!(w.get(m, 2).norm() <= 1e-12, "left lower-row case at m={m}");

            let p = nullification_angles(u.inner(), m, 3, Side::Left, (m, m + 1)).unwrap();
            let mut w = u.inner().clone();
            apply_t_left(&mut w, m - 1, p.theta, p.phi);
            assert!(w.get(m - 1, 2).norm() <= 1e-12, "left upper-row case at m={m}");

            let p = nullification_angles(u.inner(), 3, m, Side::Right, (m, m + 1)).unwrap();
            let mut w = u.inner().clone();
            apply_t_inv_right(&mut w, m - 1, p.theta, p.phi);
            assert!(w.get(2, m - 1).norm() <= 1e-12, "right left-column case at m={m}");

            let p = nullification_angles(u.inner(), 3, m + 1, Side::Right, (m, m + 1)).unwrap();
            let mut w = u.inner().clone();
            apply_t_inv_right(&mut w, m - 1, p.theta, p.phi);
            assert!(w.get(2, m).norm() <= 1e-12, "right right-column case at m={m}");
        }
    }

    #[test]
    fn nullification_trivial_and_errors() {
        let id = ComplexMatrix::identity(3);
        let p = nullification_angles(&id, 2, 1, Side::Left, (1, 2)).unwrap();
        assert_eq!((p.theta, p.phi), (0.0, 0.0), "already-zero target returns (0,0)");
        assert!(
            nullification_angles(&id, 1, 1, Side::Left, (1, 3)).is_err(),
            "non-adjacent pair must be rejected"
        );
        assert!(
            nullification_angles(&id, 3, 1, Side::Left, (1, 2)).is_err(),
            "left target must sit in the pair rows"
        );
    }

    #[test]
    fn reck_roundtrip_and_counts() {
        for n in 1..=8usize {
            let u = haar_random_unitary(n, 100 + n as u64).unwrap();
            let r = decompose_reck(&u).unwrap();
            assert_eq!(r.blocks.len(), n * (n - 1) / 2, "triangular block count at n={n}");
            let d = roundtrip(&u, &r);
            assert!(d <= 1e-8, "reconstruction at n={n} off by {d}");
            let counts = r.circuit.count_components("reck");
            assert_eq!(counts.n_bs, n * (n - 1), "beamsplitter count at n={n}");
            assert_eq!(counts.n_ps, n * n, "phase-shifter count at n={n}");
        }
    }

    #[test]
    fn clements_roundtrip_and_block_shape() {
        for n in 1..=8usize {
            let u = haar_random_unitary(n, 200 + n as u64).unwrap();
            let r = decompose_clements(&u).unwrap();
            let d = roundtrip(&u, &r);
            assert!(d <= 1e-8, "reconstruction at n={n} off by {d}");
        }
        let u = haar_random_unitary(3, 9).unwrap();
        let r = decompose_clements(&u).unwrap();
        let pairs: Vec<(usize, usize)> = r.blocks.iter().map(|b| (b.m, b.n)).collect();
        assert_eq!(
            pairs,
            vec![(1, 2), (2, 3), (1, 2)],
            "three modes factor as T12, T23, T12 in application order"
        );
    }

    #[test]
    fn blocks_and_diag_rebuild_the_source() {
        let u = haar_random_unitary(5, 77).unwrap();
        for r in [decompose_reck(&u).unwrap(), decompose_clements(&u).unwrap()] {
            let rebuilt = rebuild_blocks(5, &r.blocks, &r.diag).unwrap();
            let d = distance_up_to_global_phase(&rebuilt, u.inner()).unwrap().distance;
            assert!(d <= 1e-8, "block product must match the source, off by {d}");
        }
    }

    #[test]
    fn identity_decomposes_to_zero_angles() {
        let id = UnitaryMatrix::new(ComplexMatrix::identity(4)).unwrap();
        for r in [decompose_reck(&id).unwrap(), decompose_clements(&id).unwrap()] {
            assert!(
                r.blocks.iter().all(|b| b.theta == 0.0 && b.phi == 0.0),
                "identity needs no mixing"
            );
            assert!(r.diag.deltas().iter().all(|d| *d == 0.0), "identity needs no phases");
        }
    }

    #[test]
    fn u2_special_case() {
        let u = haar_random_unitary(2, 5).unwrap();
        let r = decompose_u2(&u).unwrap();
        assert_eq!(r.blocks.len(), 1);
        let d = roundtrip(&u, &r);
        assert!(d <= 1e-10, "two-mode reconstruction must be tight, off by {d}");
        let big = haar_random_unitary(3, 5).unwrap();
        assert!(decompose_u2(&big).is_err(), "only 2x2 inputs are accepted");
    }

    #[test]
    fn u2_residual_off_diagonal_is_tiny() {
        for seed in 0..50u64 {
            let u = haar_random_unitary(2, seed).unwrap();
            let r = decompose_u2(&u).unwrap();
            let b = r.blocks[0];
            let mut w = u.inner().clone();
            apply_t_inv_right(&mut w, 0, b.theta, b.phi);
            assert!(
                w.get(1, 0).norm() <= 1e-12 && w.get(0, 1).norm() <= 1e-12,
                "off-diagonal residual after the column operation, seed {seed}"
            );
        }
    }

    #[test]
    fn mbs3_parameters_rebuild_the_source() {
        for seed in 0..20u64 {
            let u = haar_random_unitary(3, 300 + seed).unwrap();
            let (params, r) = decompose_mbs3(&u).unwrap();
            let rebuilt = rebuild_blocks(3, &r.blocks, &r.diag).unwrap();
            let d = distance_up_to_global_phase(&rebuilt, u.inner()).unwrap().distance;
            assert!(d <= 1e-8, "named-parameter product must match, off by {d}");
            assert_eq!(params.mu1(), 0.0);
        }
    }

    #[test]
    fn mbs3_circuit_has_four_identical_blocks() {
        let u = haar_random_unitary(3, 11).unwrap();
        let (_, r) = decompose_mbs3(&u).unwrap();
        let stored: Vec<&UnitaryMatrix> = r
            .circuit
            .elements()
            .iter()
            .filter_map(|el| match el {
                Element::FixedBlock { matrix, .. } => Some(matrix),
                _ => None,
            })
            .collect();
        assert_eq!(stored.len(), 4, "exactly four fixed blocks");
        for m in &stored[1..] {
            assert_eq!(
                m.inner(),
                stored[0].inner(),
                "every stored block must be bit-identical hardware"
            );
        }
        let d = roundtrip(&u, &r);
        assert!(d <= 1e-8, "four-block circuit must replay the source, off by {d}");
    }

    #[test]
    fn mbs3_identity_gives_zero_masks() {
        let id = UnitaryMatrix::new(ComplexMatrix::identity(3)).unwrap();
        let (_, r) = decompose_mbs3(&id).unwrap();
        for el in r.circuit.elements() {
            if let Element::PhaseMask { phases } = el {
                for p in phases {
                    let z = Complex64::cis(*p);
                    assert!(
                        (z - Complex64::new(1.0, 0.0)).norm() < 1e-12,
                        "identity input leaves every mask phase at a multiple of 2 pi"
                    );
                }
            }
        }
        assert!(roundtrip(&id, &r) <= 1e-8);
    }

    #[test]
    fn mbs3_rejects_wrong_dimension() {
        let u = haar_random_unitary(4, 1).unwrap();
        assert!(decompose_mbs3(&u).is_err(), "the scheme is three-mode only");
    }

    #[test]
    fn mbs3_handles_the_tritter_itself() {
        let t = tritter_matrix();
        let (_, r) = decompose_mbs3(&t).unwrap();
        assert!(roundtrip(&t, &r) <= 1e-8);
    }

    #[test]
    fn bwc_counts_and_roundtrip() {
        for n in 3..=9usize {
            let u = haar_random_unitary(n, 400 + n as u64).unwrap();
            let r = decompose_bwc(&u).unwrap();
            let counts = r.circuit.count_components("bwc");
            assert_eq!(counts.n_fixed_mbs, n - 1, "fixed block count at n={n}");
            assert_eq!(counts.n_bs, n - 1, "standalone beamsplitter count at n={n}");
            assert!(
                counts.n_phase_masks <= n + 2,
                "mask count at n={n} is {}, budget {}",
                counts.n_phase_masks,
                n + 2
            );
            let d = roundtrip(&u, &r);
            assert!(d <= 1e-8, "reconstruction at n={n} off by {d}");
        }
    }

    #[test]
    fn bwc_blocks_are_identical_hardware() {
        let u = haar_random_unitary(6, 2).unwrap();
        let r = decompose_bwc(&u).unwrap();
        let stored: Vec<&UnitaryMatrix> = r
            .circuit
            .elements()
            .iter()
            .filter_map(|el| match el {
                Element::FixedBlock { matrix, .. } => Some(matrix),
                _ => None,
            })
            .collect();
        assert_eq!(stored.len(), 5);
        for m in &stored[1..] {
            assert_eq!(m.inner(), stored[0].inner(), "one fixed block design, reused");
        }
    }

    #[test]
    fn bwc_identity_phases_vanish() {
        let id = UnitaryMatrix::new(ComplexMatrix::identity(4)).unwrap();
        let r = decompose_bwc(&id).unwrap();
        for el in r.circuit.elements() {
            if let Element::PhaseMask { phases } = el {
                for p in phases {
                    let z = Complex64::cis(*p);
                    assert!(
                        (z - Complex64::new(1.0, 0.0)).norm() < 1e-12,
                        "identity input must need no tunable phase"
                    );
                }
            }
        }
        assert!(roundtrip(&id, &r) <= 1e-8);
    }

    #[test]
    fn bwc_rejects_small_dimensions() {
        let u = haar_random_unitary(2, 1).unwrap();
        assert!(decompose_bwc(&u).is_err(), "mesh needs at least 3 modes");
    }
}
