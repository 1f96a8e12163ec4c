//! Degree-one maps as projective 2×2 matrices, their polar decomposition
//! `[M] = [U](Λ𝕀 + 𝛌·τ)`, and the action of `PU(2) × PU(2)`.

use nalgebra::{Matrix2, Matrix3, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::rational::RationalMap;
use crate::error::{GeomError, Result};

pub type CMat2 = Matrix2<Complex64>;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Pauli matrix `τ_a`, `a ∈ {0, 1, 2}` for τ₁, τ₂, τ₃.
pub fn pauli(a: usize) -> CMat2 {
    match a {
        0 => CMat2::new(ZERO, ONE, ONE, ZERO),
        1 => CMat2::new(ZERO, -I, I, ZERO),
        2 => CMat2::new(ONE, ZERO, ZERO, -ONE),
        _ => panic!("pauli index out of range: {a}"),
    }
}

/// `v·τ`.
pub fn pauli_dot(v: &Vector3<f64>) -> CMat2 {
    pauli(0) * Complex64::from(v[0]) + pauli(1) * Complex64::from(v[1]) + pauli(2) * Complex64::from(v[2])
}

/// `exp(i v·τ / 2)`, which covers the rotation by angle `|v|` about `v̂`.
pub fn su2_exp(v: &Vector3<f64>) -> CMat2 {
    let angle = v.norm();
    if angle == 0.0 {
        return CMat2::identity();
    }
    let n = v / angle;
    let (s, c) = (0.5 * angle).sin_cos();
    CMat2::identity() * Complex64::from(c) + pauli_dot(&n) * Complex64::new(0.0, s)
}

/// The SO(3) matrix `ℛ_ab = ½ tr(τ_a R† τ_b R)` of a unitary `R`.
pub fn rotation_of(r: &CMat2) -> Matrix3<f64> {
    let rd = r.adjoint();
    Matrix3::from_fn(|a, b| 0.5 * (pauli(a) * rd * pauli(b) * r).trace().re)
}

/// Picks the representative of `±U` whose (1,1) entry has nonnegative real
/// part, breaking ties by a nonnegative imaginary part (then by the (1,2) entry).
pub fn canonical_sign(u: CMat2) -> CMat2 {
    let key = |z: Complex64| (z.re, z.im);
    let eps = 1e-15;
    let (re, im) = key(u[(0, 0)]);
    let flip = if re.abs() > eps {
        re < 0.0
    } else if im.abs() > eps {
        im < 0.0
    } else {
        let (re2, im2) = key(u[(0, 1)]);
        if re2.abs() > eps {
            re2 < 0.0
        } else {
            im2 < 0.0
        }
    };
    if flip {
        -u
    } else {
        u
    }
}

/// Degree-one map in polar form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MoebiusPolar {
    /// Special-unitary representative of `[U]`, sign fixed by [`canonical_sign`].
    pub u: CMat2,
    /// Shape vector 𝛌.
    pub lambda: Vector3<f64>,
}

impl MoebiusPolar {
    pub fn new(u: CMat2, lambda: Vector3<f64>) -> Self {
        Self {
            u: canonical_sign(u),
            lambda,
        }
    }

    /// `|𝛌|`.
    pub fn lambda_norm(&self) -> f64 {
        self.lambda.norm()
    }

    /// `Λ = √(1 + λ²)`.
    pub fn big_lambda(&self) -> f64 {
        (1.0 + self.lambda.norm_squared()).sqrt()
    }

    /// `μ = (Λ + λ)²`.
    pub fn mu(&self) -> f64 {
        (self.big_lambda() + self.lambda_norm()).powi(2)
    }

    /// `Λ𝕀 + 𝛌·τ`.
    pub fn shape_matrix(&self) -> CMat2 {
        CMat2::identity() * Complex64::from(self.big_lambda()) + pauli_dot(&self.lambda)
    }

    /// `U(Λ𝕀 + 𝛌·τ)`, a determinant-one representative of the class.
    pub fn reconstruct(&self) -> CMat2 {
        self.u * self.shape_matrix()
    }

    pub fn to_map(&self) -> RationalMap {
        RationalMap::from_matrix(&self.reconstruct()).expect("determinant-one matrix")
    }
}

/// Distance between projective classes of 2×2 matrices (Fubini–Study on the
/// coefficient line); zero iff the matrices are proportional.
pub fn projective_matrix_distance(a: &CMat2, b: &CMat2) -> f64 {
    projective_line_distance(a.as_slice(), b.as_slice())
}

/// `min_φ |â − e^{iφ} b̂|` for unit vectors `â, b̂` along `a, b`. Unlike
/// `√(1 − cos²)` this keeps full relative accuracy near zero.
pub fn projective_line_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    let na: f64 = a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    let inner: Complex64 = a.iter().zip(b).map(|(x, y)| x * y.conj()).sum();
    let phase = if inner.norm() > 0.0 { inner / inner.norm() } else { ONE };
    a.iter()
        .zip(b)
        .map(|(x, y)| (x / na - phase * y / nb).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Polar decomposition of an invertible matrix class.
///
/// After scaling to determinant one, the positive factor is
/// `H = √(M†M) = (M†M + 𝕀)/√(tr M†M + 2)` and `U = M H⁻¹` with
/// `H⁻¹ = Λ𝕀 − 𝛌·τ`.
pub fn polar_decompose(m: &CMat2) -> Result<MoebiusPolar> {
    let scale: f64 = m.iter().map(|x| x.norm_sqr()).sum();
    let det = m.determinant();
    if scale == 0.0 || det.norm() <= 1e-14 * scale {
        return Err(GeomError::InvalidInput("singular matrix has no polar decomposition".into()));
    }
    let m1 = m * det.sqrt().inv();
    let p = m1.adjoint() * m1;
    let h = (p + CMat2::identity()) * Complex64::from(1.0 / (p.trace().re + 2.0).sqrt());
    let lambda = Vector3::from_fn(|a, _| 0.5 * (pauli(a) * h).trace().re);
    let big = (1.0 + lambda.norm_squared()).sqrt();
    let h_inv = CMat2::identity() * Complex64::from(big) - pauli_dot(&lambda);
    Ok(MoebiusPolar::new(m1 * h_inv, lambda))
}

/// Action of `([L], [R]) ∈ G₀` on a polar point: `([LUR], ℛ𝛌)`.
pub fn g0_act(l: &CMat2, r: &CMat2, p: &MoebiusPolar) -> MoebiusPolar {
    MoebiusPolar::new(l * p.u * r, rotation_of(r) * p.lambda)
}

/// A unitary `R` whose rotation carries `e₃` to the direction of `v`
/// (identity when `v` vanishes).
pub fn unitary_aligning_e3(v: &Vector3<f64>) -> CMat2 {
    let n = v.norm();
    if n == 0.0 {
        return CMat2::identity();
    }
    let target = v / n;
    let e3 = Vector3::z();
    let axis = e3.cross(&target);
    let s = axis.norm();
    let c = e3.dot(&target);
    if s < 1e-15 {
        if c > 0.0 {
            return CMat2::identity();
        }
        return su2_exp(&(Vector3::x() * std::f64::consts::PI));
    }
    su2_exp(&(axis / s * s.atan2(c)))
}
