//! Dense complex matrices with unitarity testing, Haar-random sampling, and
//! comparison up to an unobservable global phase.

use crate::{Error, Result, UNITARITY_TOL};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

/// Dense complex matrix in row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, checking shape and finiteness.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension(format!(
                "matrix dimensions must be at least 1x1, got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidArgument(
                "matrix entries must be finite".into(),
            ));
        }
        Ok(Self { rows, cols, data })
    }

    /// All-zero matrix of the given shape.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    /// Identity matrix of dimension n.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    /// Builds a square matrix from nested rows.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Self::new(n, cols, rows.concat())
    }

    /// Number of rows.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of columns.
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// True when the matrix is square.
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Entry at 0-based (row, col).
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.cols + col]
    }

    /// Overwrites the entry at 0-based (row, col).
    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[row * self.cols + col] = value;
    }

    /// Matrix product self * rhs.
    pub fn mul(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = out.get(i, j) + a * rhs.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    /// Transpose without conjugation.
    pub fn transpose(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// Multiplies every entry by a scalar.
    pub fn scale(&self, z: Complex64) -> ComplexMatrix {
        let mut out = self.clone();
        for v in &mut out.data {
            *v *= z;
        }
        out
    }

    /// Max entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Max entry modulus of self - rhs.
    pub fn max_abs_diff(&self, rhs: &ComplexMatrix) -> Result<f64> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::Dimension(format!(
                "shape mismatch: {}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Applies the matrix to a column vector.
    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector length {} does not match {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * v[j]).sum())
            .collect())
    }

    /// Serializes a square matrix to the JSON document format.
    pub fn to_json(&self) -> Result<String> {
        let doc = MatrixDoc::from_matrix(self)?;
        serde_json::to_string_pretty(&doc).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Parses a matrix from the JSON document format.
    pub fn from_json(text: &str) -> Result<ComplexMatrix> {
        let doc: MatrixDoc =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        doc.into_matrix()
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (row, col): (usize, usize)) -> &Complex64 {
        &self.data[row * self.cols + col]
    }
}

/// JSON document for a square matrix: `{"n": ..., "re": [[..]], "im": [[..]]}`.
#[derive(Serialize, Deserialize)]
pub(crate) struct MatrixDoc {
    pub n: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixDoc {
    pub(crate) fn from_matrix(m: &ComplexMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Dimension(
                "only square matrices have a JSON form".into(),
            ));
        }
        let n = m.rows();
        let re = (0..n)
            .map(|i| (0..n).map(|j| m.get(i, j).re).collect())
            .collect();
        let im = (0..n)
            .map(|i| (0..n).map(|j| m.get(i, j).im).collect())
            .collect();
        Ok(Self { n, re, im })
    }

    pub(crate) fn into_matrix(self) -> Result<ComplexMatrix> {
        let n = self.n;
        if self.re.len() != n || self.im.len() != n {
            return Err(Error::Parse(format!(
                "matrix document declares n={n} but has {} re rows and {} im rows",
                self.re.len(),
                self.im.len()
            )));
        }
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            if self.re[i].len() != n || self.im[i].len() != n {
                return Err(Error::Parse(format!("row {i} has wrong length")));
            }
            for j in 0..n {
                data.push(Complex64::new(self.re[i][j], self.im[i][j]));
            }
        }
        ComplexMatrix::new(n, n, data).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Square matrix checked to be unitary at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    inner: ComplexMatrix,
}

impl UnitaryMatrix {
    /// Validates ||m†m - I||_max against the unitarity tolerance.
    pub fn new(inner: ComplexMatrix) -> Result<Self> {
        let deviation = unitarity_deviation(&inner)?;
        if deviation > UNITARITY_TOL {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self { inner })
    }

    /// Wraps a matrix known to be unitary by construction.
    pub(crate) fn new_unchecked(inner: ComplexMatrix) -> Self {
        debug_assert!(
            unitarity_deviation(&inner).map_or(false, |d| d <= 1e-9),
            "new_unchecked received a non-unitary matrix"
        );
        Self { inner }
    }

    /// Dimension N of the N x N matrix.
    pub fn dim(&self) -> usize {
        self.inner.rows()
    }

    /// Borrows the underlying matrix.
    pub fn inner(&self) -> &ComplexMatrix {
        &self.inner
    }

    /// Unwraps into the underlying matrix.
    pub fn into_inner(self) -> ComplexMatrix {
        self.inner
    }
}

impl std::ops::Deref for UnitaryMatrix {
    type Target = ComplexMatrix;

    fn deref(&self) -> &ComplexMatrix {
        &self.inner
    }
}

fn unitarity_deviation(m: &ComplexMatrix) -> Result<f64> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "unitarity is defined for square matrices, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    let mut dev = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            // (m†m)_{ij} = sum_k conj(m_{ki}) m_{kj}
            let mut s = Complex64::new(0.0, 0.0);
            for k in 0..n {
                s += m.get(k, i).conj() * m.get(k, j);
            }
            if i == j {
                s -= 1.0;
            }
            dev = dev.max(s.norm());
        }
    }
    Ok(dev)
}

/// True iff ||m†m - I||_max <= tol; errors on non-square input.
pub fn is_unitary(m: &ComplexMatrix, tol: f64) -> Result<bool> {
    Ok(unitarity_deviation(m)? <= tol)
}

/// Draws a Haar-distributed n x n unitary, deterministic in the seed.
///
/// Orthonormalizes a complex Gaussian matrix by modified Gram-Schmidt with a
/// re-orthogonalization pass; the triangular factor's diagonal is then real
/// and positive, which makes the orthonormal factor exactly Haar.
pub fn haar_random_unitary(n: usize, seed: u64) -> Result<UnitaryMatrix> {
    if n == 0 {
        return Err(Error::Dimension("dimension must be at least 1".into()));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let normal = StandardNormal;
    let mut cols: Vec<Vec<Complex64>> = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| {
                    let re: f64 = normal.sample(&mut rng);
                    let im: f64 = normal.sample(&mut rng);
                    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
                })
                .collect()
        })
        .collect();
    for j in 0..n {
        for _pass in 0..2 {
            for i in 0..j {
                let proj: Complex64 = (0..n).map(|k| cols[i][k].conj() * cols[j][k]).sum();
                for k in 0..n {
                    let update = proj * cols[i][k];
                    cols[j][k] -= update;
                }
            }
        }
        let norm: f64 = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for k in 0..n {
            cols[j][k] /= norm;
        }
    }
    let mut m = ComplexMatrix::zeros(n, n);
    for (j, col) in cols.iter().enumerate() {
        for (k, z) in col.iter().enumerate() {
            m.set(k, j, *z);
        }
    }
    Ok(UnitaryMatrix::new_unchecked(m))
}

/// Result of a comparison up to global phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseEquivalence {
    /// Minimal max-entry modulus of u - e^{i alpha} v over alpha.
    pub distance: f64,
    /// The alpha achieving the minimum, in (-pi, pi].
    pub aligning_phase: f64,
}

/// Minimizes ||u - e^{i alpha} v||_max over the global phase alpha.
///
/// Seeds the search with the phase aligning the largest-modulus entry of v,
/// plus a uniform grid, then refines the best brackets; the largest-entry seed
/// alone can miss the optimum when several entries compete.
pub fn distance_up_to_global_phase(
    u: &ComplexMatrix,
    v: &ComplexMatrix,
) -> Result<PhaseEquivalence> {
    if u.rows() != v.rows() || u.cols() != v.cols() {
        return Err(Error::Dimension(format!(
            "shape mismatch: {}x{} vs {}x{}",
            u.rows(),
            u.cols(),
            v.rows(),
            v.cols()
        )));
    }
    let objective = |alpha: f64| -> f64 {
        let phase = Complex64::cis(alpha);
        let mut worst = 0.0f64;
        for i in 0..u.rows() {
            for j in 0..u.cols() {
                worst = worst.max((u.get(i, j) - phase * v.get(i, j)).norm());
            }
        }
        worst
    };

    const GRID: usize = 1024;
    let step = std::f64::consts::TAU / GRID as f64;
    let values: Vec<f64> = (0..GRID)
        .map(|k| objective(-std::f64::consts::PI + k as f64 * step))
        .collect();
    let grid_alpha = |k: usize| -std::f64::consts::PI + k as f64 * step;

    // Brackets around every grid-local minimum, best three first.
    let mut minima: Vec<(f64, usize)> = (0..GRID)
        .filter(|&k| {
            let prev = values[(k + GRID - 1) % GRID];
            let next = values[(k + 1) % GRID];
            values[k] <= prev && values[k] <= next
        })
        .map(|k| (values[k], k))
        .collect();
    minima.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut brackets: Vec<(f64, f64)> = minima
        .iter()
        .take(3)
        .map(|&(_, k)| (grid_alpha(k) - step, grid_alpha(k) + step))
        .collect();

    // Seed from the largest-modulus entry of v.
    let mut best_entry = (0usize, 0usize, 0.0f64);
    for i in 0..v.rows() {
        for j in 0..v.cols() {
            let a = v.get(i, j).norm();
            if a > best_entry.2 {
                best_entry = (i, j, a);
            }
        }
    }
    if best_entry.2 > 0.0 {
        let seed = (u.get(best_entry.0, best_entry.1) / v.get(best_entry.0, best_entry.1)).arg();
        brackets.push((seed - step, seed + step));
    }

    let mut best = (f64::INFINITY, 0.0f64);
    for (mut lo, mut hi) in brackets {
        for _ in 0..90 {
            let m1 = lo + (hi - lo) / 3.0;
            let m2 = hi - (hi - lo) / 3.0;
            if objective(m1) < objective(m2) {
                hi = m2;
            } else {
                lo = m1;
            }
        }
        let alpha = 0.5 * (lo + hi);
        let val = objective(alpha);
        if val < best.0 {
            best = (val, alpha);
        }
    }
    Ok(PhaseEquivalence {
        distance: best.0,
        aligning_phase: crate::normalize_angle(best.1),
    })
}

/// Embeds a 2x2 block at 1-based modes m < k inside an n x n identity.
///
/// The modes need not be adjacent; entries (m,m), (m,k), (k,m), (k,k) are
/// replaced by the block.
pub fn embed_block(
    n: usize,
    block: &ComplexMatrix,
    m: usize,
    k: usize,
) -> Result<ComplexMatrix> {
    if block.rows() != 2 || block.cols() != 2 {
        return Err(Error::Dimension(format!(
            "block must be 2x2, got {}x{}",
            block.rows(),
            block.cols()
        )));
    }
    if m < 1 || k <= m || k > n {
        return Err(Error::Index(format!(
            "mode indices must satisfy 1 <= m < k <= n, got m={m}, k={k}, n={n}"
        )));
    }
    let (a, b) = (m - 1, k - 1);
    let mut out = ComplexMatrix::identity(n);
    out.set(a, a, block.get(0, 0));
    out.set(a, b, block.get(0, 1));
    out.set(b, a, block.get(1, 0));
    out.set(b, b, block.get(1, 1));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_is_unitary() {
        let m = ComplexMatrix::identity(3);
        assert!(is_unitary(&m, 1e-10).unwrap(), "identity must be unitary");
    }

    #[test]
    fn perturbed_identity_is_not_unitary() {
        let mut m = ComplexMatrix::identity(3);
        m.set(0, 0, c(1.01, 0.0));
        assert!(!is_unitary(&m, 1e-10).unwrap(), "1.01 on the diagonal breaks unitarity");
    }

    #[test]
    fn non_square_unitarity_is_an_error() {
        let m = ComplexMatrix::zeros(2, 3);
        assert!(is_unitary(&m, 1e-10).is_err(), "non-square input must error");
    }

    #[test]
    fn nan_entries_rejected() {
        let err = ComplexMatrix::new(1, 1, vec![c(f64::NAN, 0.0)]);
        assert!(err.is_err(), "NaN entries must be rejected at construction");
    }

    #[test]
    fn haar_is_deterministic_and_unitary() {
        let a = haar_random_unitary(4, 7).unwrap();
        let b = haar_random_unitary(4, 7).unwrap();
        assert_eq!(a.inner(), b.inner(), "same seed must give identical matrices");
        for n in 1..=16 {
            let u = haar_random_unitary(n, 1).unwrap();
            assert!(
                is_unitary(u.inner(), 1e-10).unwrap(),
                "haar sample at n={n} failed the unitarity check"
            );
        }
    }

    #[test]
    fn haar_dimension_zero_is_an_error() {
        assert!(haar_random_unitary(0, 1).is_err(), "n=0 must be rejected");
    }

    #[test]
    fn haar_dimension_one_is_a_phase() {
        let u = haar_random_unitary(1, 99).unwrap();
        assert!(
            (u.get(0, 0).norm() - 1.0).abs() < 1e-12,
            "1x1 haar sample must have unit modulus"
        );
    }

    #[test]
    fn distance_identical_and_phased() {
        let u = haar_random_unitary(5, 3).unwrap();
        let d = distance_up_to_global_phase(u.inner(), u.inner()).unwrap();
        assert!(d.distance <= 1e-12, "distance to itself must vanish, got {}", d.distance);
        let v = u.inner().scale(Complex64::cis(std::f64::consts::PI / 3.0));
        let d = distance_up_to_global_phase(u.inner(), &v).unwrap();
        assert!(d.distance <= 1e-12, "pure global phase must vanish, got {}", d.distance);
    }

    #[test]
    fn distance_identity_vs_sign_flip_is_sqrt2() {
        let u = ComplexMatrix::identity(2);
        let mut v = ComplexMatrix::identity(2);
        v.set(1, 1, c(-1.0, 0.0));
        let d = distance_up_to_global_phase(&u, &v).unwrap();
        assert!(
            (d.distance - std::f64::consts::SQRT_2).abs() < 1e-9,
            "optimal alignment is at alpha = +-pi/2 with distance sqrt(2), got {}",
            d.distance
        );
    }

    #[test]
    fn embed_non_adjacent_swap() {
        let swap = ComplexMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let m = embed_block(4, &swap, 1, 3).unwrap();
        let e1 = m.apply(&[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!((e1[2].re - 1.0).abs() < 1e-15, "mode 1 must map to mode 3");
        assert!(e1[0].norm() < 1e-15, "mode 1 amplitude must leave mode 1");
    }

    #[test]
    fn embed_index_contract() {
        let b = ComplexMatrix::identity(2);
        assert!(embed_block(3, &b, 2, 2).is_err(), "m = k must be rejected");
        assert!(embed_block(3, &b, 0, 2).is_err(), "modes are 1-based, 0 is invalid");
        assert!(embed_block(3, &b, 2, 4).is_err(), "k beyond n must be rejected");
    }

    #[test]
    fn matrix_json_round_trip() {
        let u = haar_random_unitary(3, 11).unwrap();
        let text = u.inner().to_json().unwrap();
        let back = ComplexMatrix::from_json(&text).unwrap();
        assert_eq!(&back, u.inner(), "JSON round-trip must be bit-exact");
    }

    #[test]
    fn matrix_json_shape_errors() {
        assert!(
            ComplexMatrix::from_json("{\"n\": 2, \"re\": [[1,0]], \"im\": [[0,0]]}").is_err(),
            "row-count mismatch must be a parse error"
        );
        assert!(ComplexMatrix::from_json("not json").is_err(), "garbage must be a parse error");
    }

    proptest! {
        #[test]
        fn distance_is_symmetric(seed_a in 0u64..500, seed_b in 0u64..500) {
            let u = haar_random_unitary(3, seed_a).unwrap();
            let v = haar_random_unitary(3, seed_b).unwrap();
            let duv = distance_up_to_global_phase(u.inner(), v.inner()).unwrap().distance;
            let dvu = distance_up_to_global_phase(v.inner(), u.inner()).unwrap().distance;
            prop_assert!((duv - dvu).abs() <= 1e-12, "asymmetry {duv} vs {dvu}");
        }

        #[test]
        fn embed_preserves_unitarity(seed in 0u64..1000) {
            let block = haar_random_unitary(2, seed).unwrap();
            let m = embed_block(5, block.inner(), 2, 4).unwrap();
            prop_assert!(is_unitary(&m, 1e-10).unwrap());
        }
    }
}
