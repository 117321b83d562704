//! Elementary optical matrices: beamsplitter, the two asymmetric MZI forms,
//! the symmetric MZI, diagonal phase layers, the tritter, and the uniform
//! multiport beamsplitter cascade.

use crate::matrix::{embed_block, ComplexMatrix, UnitaryMatrix};
use crate::{Error, Result};
use num_complex::Complex64;

/// Beamsplitter transmittance |T|^2 in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BsRatio {
    eta: f64,
}

impl BsRatio {
    /// Validates 0 <= eta <= 1.
    pub fn new(eta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eta) {
            return Err(Error::InvalidArgument(format!(
                "transmittance must lie in [0, 1], got {eta}"
            )));
        }
        Ok(Self { eta })
    }

    /// The 50:50 ratio.
    pub fn half() -> Self {
        Self { eta: 0.5 }
    }

    /// Transmittance value.
    pub fn eta(&self) -> f64 {
        self.eta
    }
}

/// Angle pair (theta, phi) of an asymmetric MZI block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmziParams {
    /// Mixing angle.
    pub theta: f64,
    /// External phase angle.
    pub phi: f64,
}

impl AmziParams {
    /// Validates finiteness of both angles.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !theta.is_finite() || !phi.is_finite() {
            return Err(Error::InvalidArgument("angles must be finite".into()));
        }
        Ok(Self { theta, phi })
    }
}

/// Internal phase pair (phi11, phi12) of a symmetric MZI.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmziParams {
    /// Phase on the first internal arm.
    pub phi11: f64,
    /// Phase on the second internal arm.
    pub phi12: f64,
}

impl SmziParams {
    /// Validates finiteness of both phases.
    pub fn new(phi11: f64, phi12: f64) -> Result<Self> {
        if !phi11.is_finite() || !phi12.is_finite() {
            return Err(Error::InvalidArgument("phases must be finite".into()));
        }
        Ok(Self { phi11, phi12 })
    }
}

/// Diagonal phase angles delta_1..delta_N with the factor-2 convention
/// diag(exp(2i delta_k)).
#[derive(Debug, Clone, PartialEq)]
pub struct DiagPhases {
    deltas: Vec<f64>,
}

impl DiagPhases {
    /// Validates a non-empty, finite list.
    pub fn new(deltas: Vec<f64>) -> Result<Self> {
        if deltas.is_empty() {
            return Err(Error::Dimension("phase list must be non-empty".into()));
        }
        if deltas.iter().any(|d| !d.is_finite()) {
            return Err(Error::InvalidArgument("phases must be finite".into()));
        }
        Ok(Self { deltas })
    }

    /// The phase angles.
    pub fn deltas(&self) -> &[f64] {
        &self.deltas
    }

    /// Number of modes.
    pub fn len(&self) -> usize {
        self.deltas.len()
    }

    /// True when the list has a single entry.
    pub fn is_empty(&self) -> bool {
        self.deltas.is_empty()
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Beamsplitter matrix [[sqrt(1-eta), sqrt(eta)], [sqrt(eta), -sqrt(1-eta)]].
pub fn bs_matrix(r: BsRatio) -> UnitaryMatrix {
    let t = r.eta().sqrt();
    let q = (1.0 - r.eta()).sqrt();
    let m = ComplexMatrix::from_rows(&[vec![c(q, 0.0), c(t, 0.0)], vec![c(t, 0.0), c(-q, 0.0)]])
        .expect("static 2x2 shape");
    UnitaryMatrix::new_unchecked(m)
}

/// Asymmetric-MZI block with both phase shifters on the first mode:
/// e^{i theta} [[e^{2i phi} cos, i sin], [i e^{2i phi} sin, cos]].
pub fn t_matrix(p: AmziParams) -> UnitaryMatrix {
    let g = Complex64::cis(p.theta);
    let e = Complex64::cis(2.0 * p.phi);
    let (s, co) = p.theta.sin_cos();
    let i = c(0.0, 1.0);
    let m = ComplexMatrix::from_rows(&[
        vec![g * e * co, g * i * s],
        vec![g * i * e * s, g * co],
    ])
    .expect("static 2x2 shape");
    UnitaryMatrix::new_unchecked(m)
}

/// Variant of the asymmetric-MZI block with both phase shifters on the second
/// mode; equals e^{2i(theta+phi)} t_matrix(-theta, -phi).
pub fn t_tilde_matrix(p: AmziParams) -> UnitaryMatrix {
    let g = Complex64::cis(p.theta);
    let e = Complex64::cis(2.0 * p.phi);
    let (s, co) = p.theta.sin_cos();
    let mi = c(0.0, -1.0);
    let m = ComplexMatrix::from_rows(&[
        vec![g * co, g * mi * e * s],
        vec![g * mi * s, g * e * co],
    ])
    .expect("static 2x2 shape");
    UnitaryMatrix::new_unchecked(m)
}

/// Symmetric MZI: B(1/2) diag(e^{i phi11}, e^{i phi12}) B(1/2).
pub fn smzi_matrix(p: SmziParams) -> UnitaryMatrix {
    let a = Complex64::cis(p.phi11);
    let b = Complex64::cis(p.phi12);
    let m = ComplexMatrix::from_rows(&[
        vec![0.5 * (a + b), 0.5 * (a - b)],
        vec![0.5 * (a - b), 0.5 * (a + b)],
    ])
    .expect("static 2x2 shape");
    UnitaryMatrix::new_unchecked(m)
}

/// Diagonal phase matrix diag(exp(2i delta_k)).
pub fn diag_matrix(d: &DiagPhases) -> UnitaryMatrix {
    let n = d.len();
    let mut m = ComplexMatrix::zeros(n, n);
    for (k, delta) in d.deltas().iter().enumerate() {
        m.set(k, k, Complex64::cis(2.0 * delta));
    }
    UnitaryMatrix::new_unchecked(m)
}

/// Three-mode splitter B_23(1/2) B_12(2/3): uniform first column 1/sqrt(3).
pub fn tritter_matrix() -> UnitaryMatrix {
    let b12 = embed_block(
        3,
        bs_matrix(BsRatio::new(2.0 / 3.0).expect("2/3 in range")).inner(),
        1,
        2,
    )
    .expect("static embedding");
    let b23 = embed_block(3, bs_matrix(BsRatio::half()).inner(), 2, 3).expect("static embedding");
    UnitaryMatrix::new_unchecked(b23.mul(&b12).expect("3x3 product"))
}

/// The phase-free repeated block B_23(1/2) B_12(1/2) of the four-block scheme.
///
/// Real and orthogonal, so running it backwards applies its transpose.
pub fn fixed_tritter_block() -> UnitaryMatrix {
    let b12 = embed_block(3, bs_matrix(BsRatio::half()).inner(), 1, 2).expect("static embedding");
    let b23 = embed_block(3, bs_matrix(BsRatio::half()).inner(), 2, 3).expect("static embedding");
    UnitaryMatrix::new_unchecked(b23.mul(&b12).expect("3x3 product"))
}

/// Cascade of n-1 beamsplitters distributing one input uniformly over n
/// outputs: BS_k on modes (k, k+1) with eta_k = (n-k)/(n-k+1), ascending k.
pub fn mbs_matrix(n: usize) -> Result<UnitaryMatrix> {
    if n < 2 {
        return Err(Error::Dimension(format!(
            "a multiport splitter needs at least 2 modes, got {n}"
        )));
    }
    let mut acc = ComplexMatrix::identity(n);
    for k in 1..n {
        let eta = (n - k) as f64 / (n - k + 1) as f64;
        let bs = embed_block(n, bs_matrix(BsRatio::new(eta)?).inner(), k, k + 1)?;
        acc = bs.mul(&acc)?;
    }
    Ok(UnitaryMatrix::new_unchecked(acc))
}
