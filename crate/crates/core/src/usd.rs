//! Worked example: unambiguous discrimination of two nonorthogonal states on
//! three optical modes — measurement vectors, the extended-space unitary, its
//! success probability, and two closed-form factorizations.

use crate::matrix::{embed_block, ComplexMatrix, UnitaryMatrix};
use crate::primitives::{diag_matrix, t_matrix, AmziParams, DiagPhases};
use crate::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, PI, SQRT_2};

/// State-pair amplitudes for the discrimination problem.
///
/// The two states are a|0> + b|1> and a|0> - b|1> with a > b > 0 and
/// a^2 + b^2 = 1; delta = b/a measures their overlap direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UsdParams {
    a: f64,
    b: f64,
    delta: f64,
}

impl UsdParams {
    /// Builds from both amplitudes; they must be normalized with a > b > 0.
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidArgument(
                "amplitudes must be finite".into(),
            ));
        }
        if !(a > b && b > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "amplitudes must satisfy a > b > 0, got a = {a}, b = {b}"
            )));
        }
        let norm = a * a + b * b;
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "amplitudes must be normalized: a^2 + b^2 = {norm} is off by {:.3e}",
                (norm - 1.0).abs()
            )));
        }
        Ok(Self { a, b, delta: b / a })
    }

    /// Builds from the smaller amplitude b in (0, 1/sqrt(2)).
    pub fn from_b(b: f64) -> Result<Self> {
        if !b.is_finite() || b <= 0.0 || b * b >= 0.5 {
            return Err(Error::InvalidArgument(format!(
                "b must lie in (0, 1/sqrt(2)) so that a > b, got {b}"
            )));
        }
        let a = (1.0 - b * b).sqrt();
        Ok(Self { a, b, delta: b / a })
    }

    /// Builds from the ratio delta = b/a in (0, 1).
    pub fn from_delta(delta: f64) -> Result<Self> {
        if !delta.is_finite() || delta <= 0.0 || delta >= 1.0 {
            return Err(Error::InvalidArgument(format!(
                "delta must lie strictly inside (0, 1), got {delta}"
            )));
        }
        let a = 1.0 / (1.0 + delta * delta).sqrt();
        Ok(Self {
            a,
            b: delta * a,
            delta,
        })
    }

    /// Larger amplitude.
    pub fn a(&self) -> f64 {
        self.a
    }

    /// Smaller amplitude.
    pub fn b(&self) -> f64 {
        self.b
    }

    /// Amplitude ratio b/a.
    pub fn delta(&self) -> f64 {
        self.delta
    }
}

/// The three measurement vectors and their extensions to the third mode.
///
/// The u vectors live on the two-dimensional state space (third component
/// zero): two unambiguous detectors and one inconclusive direction. The w
/// vectors extend them to an orthonormal triple; the discrimination unitary
/// maps w_j to the j-th output mode.
#[derive(Debug, Clone, PartialEq)]
pub struct PovmSet {
    /// Detector direction for the first state.
    pub u1: [Complex64; 3],
    /// Detector direction for the second state.
    pub u2: [Complex64; 3],
    /// Inconclusive direction.
    pub u3: [Complex64; 3],
    /// Orthonormal extension of u1.
    pub w1: [Complex64; 3],
    /// Orthonormal extension of u2.
    pub w2: [Complex64; 3],
    /// Orthonormal extension of u3.
    pub w3: [Complex64; 3],
}

fn re3(x: f64, y: f64, z: f64) -> [Complex64; 3] {
    [
        Complex64::new(x, 0.0),
        Complex64::new(y, 0.0),
        Complex64::new(z, 0.0),
    ]
}

/// Measurement vectors for the discrimination problem.
pub fn povm_set(p: UsdParams) -> PovmSet {
    let d = p.delta();
    let g = (1.0 - d * d).sqrt();
    let s = 1.0 / SQRT_2;
    PovmSet {
        u1: re3(d * s, s, 0.0),
        u2: re3(d * s, -s, 0.0),
        u3: re3(g, 0.0, 0.0),
        w1: re3(d * s, s, g * s),
        w2: re3(d * s, -s, g * s),
        w3: re3(g, 0.0, -d),
    }
}

/// The 3x3 discrimination unitary (all entries real).
///
/// Row j is the measurement vector w_j, so each detector mode collects
/// exactly its measurement amplitude.
pub fn usd_unitary(p: UsdParams) -> UnitaryMatrix {
    let d = p.delta();
    let g = (1.0 - d * d).sqrt();
    let s = 1.0 / SQRT_2;
    let m = ComplexMatrix::from_rows(&[
        re3(d * s, s, g * s).to_vec(),
        re3(d * s, -s, g * s).to_vec(),
        re3(g, 0.0, -d).to_vec(),
    ])
    .expect("static 3x3 shape");
    UnitaryMatrix::new_unchecked(m)
}

/// Applies the discrimination unitary to both input states.
///
/// Returns the output amplitude vectors for the plus and minus state; the
/// first lands entirely on modes 1 and 3, the second on modes 2 and 3.
pub fn apply_to_inputs(p: UsdParams) -> ([Complex64; 3], [Complex64; 3]) {
    let u = usd_unitary(p);
    let chi = |sign: f64| vec![Complex64::new(p.a(), 0.0), Complex64::new(sign * p.b(), 0.0), Complex64::new(0.0, 0.0)];
    let plus = u.apply(&chi(1.0)).expect("3-vector matches 3x3");
    let minus = u.apply(&chi(-1.0)).expect("3-vector matches 3x3");
    (
        [plus[0], plus[1], plus[2]],
        [minus[0], minus[1], minus[2]],
    )
}

/// Probability of an unambiguous outcome, computed from the matrix action.
///
/// Each state arrives with probability 1/2; its conclusive detector fires
/// with the squared modulus of the corresponding output amplitude. The
/// result equals 2 b^2, the optimum for this state pair.
pub fn success_probability(p: UsdParams) -> f64 {
    let (plus, minus) = apply_to_inputs(p);
    0.5 * plus[0].norm_sqr() + 0.5 * minus[1].norm_sqr()
}

/// A named closed-form parameter set for a three-mode factorization.
///
/// The angle fields label the three two-mode factors in application order;
/// which factorization they parameterize is documented on the function that
/// returns them. a1 is the auxiliary positive amplitude satisfying
/// a1^2 = 6 - delta^2 - 2 sqrt(1-delta^2) - 2 sqrt(2) delta
///        - 2 sqrt(2) delta sqrt(1-delta^2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UsdClosedForm {
    /// Mixing angle of the first factor.
    pub theta1: f64,
    /// Mixing angle of the second factor.
    pub theta2: f64,
    /// Mixing angle of the third factor.
    pub theta3: f64,
    /// Phase angle of the first factor.
    pub phi1: f64,
    /// Phase angle of the second factor.
    pub phi2: f64,
    /// Phase angle of the third factor.
    pub phi3: f64,
    /// Auxiliary amplitude fixed by delta.
    pub a1: f64,
}

fn a1_of(delta: f64) -> f64 {
    let g = (1.0 - delta * delta).sqrt();
    (6.0 - delta * delta - 2.0 * g - 2.0 * SQRT_2 * delta - 2.0 * SQRT_2 * delta * g).sqrt()
}

fn t12(theta: f64, phi: f64) -> ComplexMatrix {
    embed_block(
        3,
        t_matrix(AmziParams::new(theta, phi).expect("finite angles")).inner(),
        1,
        2,
    )
    .expect("embedding on 3 modes")
}

fn t23(theta: f64, phi: f64) -> ComplexMatrix {
    embed_block(
        3,
        t_matrix(AmziParams::new(theta, phi).expect("finite angles")).inner(),
        2,
        3,
    )
    .expect("embedding on 3 modes")
}

fn d3(d1: f64, d2: f64, d3v: f64) -> ComplexMatrix {
    diag_matrix(&DiagPhases::new(vec![d1, d2, d3v]).expect("three finite phases"))
        .into_inner()
}

/// Closed-form rectangular-mesh factorization of the discrimination unitary.
///
/// The returned angles are the factor parameters in application order:
/// a (1,2) block with (theta1, phi1) = (pi/2, t/2 + pi/8), a (2,3) block
/// with (theta2, phi2) = (-t, pi/8 - t/2), a (1,2) block with
/// (theta3, phi3) = (-3 pi/4, pi/2 - t/2), and the output diagonal
/// (-pi/4, 0, 3 pi/8), where t = atan(sqrt(1-delta^2)/delta). The returned
/// matrix is that product; it reproduces the discrimination unitary up to
/// the constant global phase exp(i (t + pi/4)).
pub fn usd_clements_closed_form(p: UsdParams) -> (UsdClosedForm, UnitaryMatrix) {
    let d = p.delta();
    let g = (1.0 - d * d).sqrt();
    let t = g.atan2(d);
    let form = UsdClosedForm {
        theta1: FRAC_PI_2,
        phi1: t / 2.0 + FRAC_PI_8,
        theta2: -t,
        phi2: FRAC_PI_8 - t / 2.0,
        theta3: -0.75 * PI,
        phi3: FRAC_PI_2 - t / 2.0,
        a1: a1_of(d),
    };
    let product = d3(-FRAC_PI_4, 0.0, 3.0 * FRAC_PI_8)
        .mul(&t12(form.theta3, form.phi3))
        .and_then(|m| m.mul(&t23(form.theta2, form.phi2)))
        .and_then(|m| m.mul(&t12(form.theta1, form.phi1)))
        .expect("3x3 product shapes agree");
    debug_assert!(
        product
            .scale(Complex64::cis(t + FRAC_PI_4))
            .max_abs_diff(usd_unitary(p).inner())
            .expect("same shape")
            <= 1e-10,
        "closed form drifted from the discrimination unitary"
    );
    (form, UnitaryMatrix::new_unchecked(product))
}

/// The discrimination unitary conjugated by the 50:50 coupler on modes
/// (2, 3), written out entrywise.
pub fn usd_uprime(p: UsdParams) -> UnitaryMatrix {
    let d = p.delta();
    let g = (1.0 - d * d).sqrt();
    let s = 1.0 / SQRT_2;
    let q = 0.5 * s; // 1 / (2 sqrt(2))
    let m = ComplexMatrix::from_rows(&[
        re3(d * s, (1.0 + g) / 2.0, (1.0 - g) / 2.0).to_vec(),
        re3(
            (d + SQRT_2 * g) / 2.0,
            (g - 1.0 - SQRT_2 * d) * q,
            (SQRT_2 * d - 1.0 - g) * q,
        )
        .to_vec(),
        re3(
            (d - SQRT_2 * g) / 2.0,
            (g - 1.0 + SQRT_2 * d) * q,
            (-1.0 - g - SQRT_2 * d) * q,
        )
        .to_vec(),
    ])
    .expect("static 3x3 shape");
    UnitaryMatrix::new_unchecked(m)
}

/// Closed-form rectangular-mesh factorization of the conjugated unitary.
///
/// The returned angles are the named parameter set of that factorization:
/// mixing angles theta1..theta3 picked on the branches
/// theta1 = atan2(sqrt(2) d - 2 g, g - 1 + sqrt(2) d),
/// theta2 = atan2(sqrt(2) (1 - g), 1 + g - sqrt(2) d),
/// theta3 = atan2(a1, 1 + sqrt(2) d + g) with g = sqrt(1 - d^2), and
/// phase angles (phi1, phi2, phi3) = (-pi/2, pi/2, -pi/2 + theta2). The
/// returned matrix is the phase-merged product
/// D3(-pi/4, 0, pi/4 - theta2/2) T12(-theta2, (pi - theta1 - theta2
/// - theta3)/2) M T12(theta1, -pi/4), where M carries the (2,3) block
/// exp(-i (2 theta3 + theta2 - pi/2)) T(theta3, pi/4 - theta1/2); it
/// reproduces the conjugated unitary up to the global phase
/// exp(i (2 theta2 + theta3)).
pub fn uprime_closed_form(p: UsdParams) -> (UsdClosedForm, UnitaryMatrix) {
    let d = p.delta();
    let g = (1.0 - d * d).sqrt();
    let a1 = a1_of(d);
    let t1 = (SQRT_2 * d - 2.0 * g).atan2(g - 1.0 + SQRT_2 * d);
    let t2 = (SQRT_2 * (1.0 - g)).atan2(1.0 + g - SQRT_2 * d);
    let t3 = a1.atan2(1.0 + SQRT_2 * d + g);
    let form = UsdClosedForm {
        theta1: t1,
        theta2: t2,
        theta3: t3,
        phi1: -FRAC_PI_2,
        phi2: FRAC_PI_2,
        phi3: -FRAC_PI_2 + t2,
        a1,
    };
    let block_phase = -(2.0 * t3 + t2 - FRAC_PI_2);
    let mid = d3(0.0, block_phase / 2.0, block_phase / 2.0)
        .mul(&t23(t3, FRAC_PI_4 - t1 / 2.0))
        .expect("3x3 product shapes agree");
    let product = d3(-FRAC_PI_4, 0.0, FRAC_PI_4 - t2 / 2.0)
        .mul(&t12(-t2, (PI - t1 - t2 - t3) / 2.0))
        .and_then(|m| m.mul(&mid))
        .and_then(|m| m.mul(&t12(t1, -FRAC_PI_4)))
        .expect("3x3 product shapes agree");
    debug_assert!(
        product
            .scale(Complex64::cis(2.0 * t2 + t3))
            .max_abs_diff(usd_uprime(p).inner())
            .expect("same shape")
            <= 1e-10,
        "closed form drifted from the conjugated unitary"
    );
    (form, UnitaryMatrix::new_unchecked(product))
}
