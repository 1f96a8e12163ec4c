use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::poly::{self, horner, horner_d};
use crate::error::{GeomError, Result};
use crate::sphere::{chordal_distance, ExtendedComplex};

/// Default resultant threshold after scaling coefficients to unit max modulus.
pub const RESULTANT_TOL: f64 = 1e-10;

/// A degree-`n` rational map
/// `W(z) = (a₁ + a₂z + … + a_{n+1}zⁿ) / (a_{n+2} + … + a_{2n+2}zⁿ)`.
///
/// Coefficients are homogeneous: scaling all of them by a nonzero complex
/// number gives the same map, so comparisons go through
/// [`RationalMap::projective_distance`] rather than `==`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MapJson", into = "MapJson")]
pub struct RationalMap {
    degree: usize,
    coeffs: Vec<Complex64>,
}

/// Wire format: `{"degree": n, "coefficients": [[re, im], ...]}`, numerator first.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MapJson {
    pub degree: usize,
    pub coefficients: Vec<[f64; 2]>,
}

impl TryFrom<MapJson> for RationalMap {
    type Error = GeomError;
    fn try_from(j: MapJson) -> Result<Self> {
        RationalMap::new(j.degree, j.coefficients.iter().map(|p| Complex64::new(p[0], p[1])).collect())
    }
}

impl From<RationalMap> for MapJson {
    fn from(m: RationalMap) -> Self {
        MapJson {
            degree: m.degree,
            coefficients: m.coeffs.iter().map(|c| [c.re, c.im]).collect(),
        }
    }
}

/// Local homogeneous data of a map at a point: `W = num/den` and the
/// z-derivatives of both polynomials.
#[derive(Debug, Clone, Copy)]
pub struct LocalValue {
    pub num: Complex64,
    pub den: Complex64,
    pub dnum: Complex64,
    pub dden: Complex64,
}

impl RationalMap {
    /// Builds a map from its `2n+2` coefficients. Only shape and the
    /// nonzero-vector condition are checked here; use
    /// [`RationalMap::is_valid_degree`] for the no-common-root condition.
    pub fn new(degree: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        if degree == 0 {
            return Err(GeomError::InvalidInput("degree must be positive".into()));
        }
        if coeffs.len() != 2 * degree + 2 {
            return Err(GeomError::InvalidInput(format!(
                "degree {degree} needs {} coefficients, got {}",
                2 * degree + 2,
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(GeomError::InvalidInput("non-finite coefficient".into()));
        }
        if coeffs.iter().all(|c| c.norm_sqr() == 0.0) {
            return Err(GeomError::InvalidInput("zero coefficient vector".into()));
        }
        Ok(Self { degree, coeffs })
    }

    /// From numerator and denominator polynomials (ascending powers); the
    /// degree is the larger of the two polynomial lengths minus one.
    pub fn from_num_den(num: &[Complex64], den: &[Complex64]) -> Result<Self> {
        let degree = num.len().max(den.len()).saturating_sub(1);
        let mut coeffs = poly::padded(num.to_vec(), degree + 1);
        coeffs.extend(poly::padded(den.to_vec(), degree + 1));
        Self::new(degree, coeffs)
    }

    pub fn identity() -> Self {
        Self::power(1)
    }

    /// `z ↦ zⁿ`.
    pub fn power(n: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * n + 2];
        coeffs[n] = Complex64::new(1.0, 0.0);
        coeffs[n + 1] = Complex64::new(1.0, 0.0);
        Self { degree: n, coeffs }
    }

    /// `z ↦ μz`, the maps along the radial curve in degree one.
    pub fn dilation(mu: f64) -> Self {
        let mut m = Self::power(1);
        m.coeffs[1] = Complex64::new(mu, 0.0);
        m
    }

    /// Degree-one map `(a₁₁z + a₁₂)/(a₂₁z + a₂₂)` from its matrix.
    pub fn from_matrix(m: &Matrix2<Complex64>) -> Result<Self> {
        Self::new(1, vec![m[(0, 1)], m[(0, 0)], m[(1, 1)], m[(1, 0)]])
    }

    pub fn to_matrix(&self) -> Result<Matrix2<Complex64>> {
        if self.degree != 1 {
            return Err(GeomError::InvalidInput("only degree-one maps have a matrix".into()));
        }
        let a = &self.coeffs;
        Ok(Matrix2::new(a[1], a[0], a[3], a[2]))
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn numerator(&self) -> &[Complex64] {
        &self.coeffs[..=self.degree]
    }

    pub fn denominator(&self) -> &[Complex64] {
        &self.coeffs[self.degree + 1..]
    }

    pub fn scaled(&self, xi: Complex64) -> Self {
        Self {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|&c| c * xi).collect(),
        }
    }

    /// Coefficients rescaled so the largest has modulus one.
    pub fn normalized(&self) -> Self {
        let m = self.max_modulus();
        self.scaled(Complex64::new(1.0 / m, 0.0))
    }

    fn max_modulus(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// `W(z)` on the Riemann sphere. For `|z| > 1` the reversed polynomials in
    /// `1/z` are used, which keeps large arguments well conditioned.
    pub fn evaluate(&self, z: ExtendedComplex) -> ExtendedComplex {
        match z {
            ExtendedComplex::Infinity => ExtendedComplex::ratio(self.coeffs[self.degree], self.coeffs[2 * self.degree + 1]),
            ExtendedComplex::Finite(z) if z.norm() > 1.0 => {
                let w = z.inv();
                let (n, d) = self.reversed_value(w);
                ExtendedComplex::ratio(n, d)
            }
            ExtendedComplex::Finite(z) => ExtendedComplex::ratio(horner(self.numerator(), z), horner(self.denominator(), z)),
        }
    }

    pub fn eval(&self, z: Complex64) -> ExtendedComplex {
        self.evaluate(ExtendedComplex::Finite(z))
    }

    /// Numerator, denominator and their derivatives at finite `z`.
    pub fn local(&self, z: Complex64) -> LocalValue {
        let (num, dnum) = horner_d(self.numerator(), z);
        let (den, dden) = horner_d(self.denominator(), z);
        LocalValue { num, den, dnum, dden }
    }

    /// Same as [`RationalMap::local`] but for the map `w ↦ W(1/w)` written with
    /// reversed coefficient lists (valid at `w = 0`).
    pub fn local_reversed(&self, w: Complex64) -> LocalValue {
        let rn: Vec<Complex64> = self.numerator().iter().rev().copied().collect();
        let rd: Vec<Complex64> = self.denominator().iter().rev().copied().collect();
        let (num, dnum) = horner_d(&rn, w);
        let (den, dden) = horner_d(&rd, w);
        LocalValue { num, den, dnum, dden }
    }

    fn reversed_value(&self, w: Complex64) -> (Complex64, Complex64) {
        let n = self.numerator().iter().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * w + c);
        let d = self.denominator().iter().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * w + c);
        (n, d)
    }

    /// Resultant of numerator and denominator viewed as binary forms of
    /// degree `n`, computed after scaling coefficients to unit max modulus.
    /// Vanishes exactly when the two share a root on the sphere (including a
    /// common root at infinity, i.e. both leading coefficients zero).
    pub fn resultant(&self) -> f64 {
        let m = self.normalized();
        let n = self.degree;
        let size = 2 * n;
        let mut s = DMatrix::<Complex64>::zeros(size, size);
        // Rows hold descending coefficients, shifted one column per row.
        for row in 0..n {
            for k in 0..=n {
                s[(row, row + k)] = m.numerator()[n - k];
                s[(row + n, row + k)] = m.denominator()[n - k];
            }
        }
        s.determinant().norm()
    }

    /// True iff the map has true degree `n`: leading coefficients not both
    /// below `tol` and scaled resultant above `tol`.
    pub fn is_valid_degree(&self, tol: f64) -> Result<bool> {
        let max = self.max_modulus();
        if max == 0.0 {
            return Err(GeomError::InvalidInput("zero coefficient vector".into()));
        }
        let lead_num = self.coeffs[self.degree].norm() / max;
        let lead_den = self.coeffs[2 * self.degree + 1].norm() / max;
        if lead_num < tol && lead_den < tol {
            return Ok(false);
        }
        Ok(self.resultant() > tol)
    }

    /// Errors with [`GeomError::IllConditioned`] when the resultant is below `tol`.
    pub fn require_valid(&self, tol: f64) -> Result<()> {
        if self.is_valid_degree(tol)? {
            Ok(())
        } else {
            Err(GeomError::IllConditioned {
                resultant: self.resultant(),
                threshold: tol,
            })
        }
    }

    /// Chordal distance between the unit-normalized, phase-aligned coefficient vectors;
    /// zero iff the two vectors are proportional.
    pub fn projective_distance(&self, other: &RationalMap) -> f64 {
        if self.degree != other.degree {
            return f64::INFINITY;
        }
        super::moebius::projective_line_distance(&self.coeffs, &other.coeffs)
    }

    /// Max chordal distance between the two maps over the sample points.
    pub fn sup_distance(&self, other: &RationalMap, grid: &[Complex64]) -> f64 {
        grid.iter()
            .map(|&z| chordal_distance(self.eval(z), other.eval(z)))
            .fold(0.0, f64::max)
    }

    /// `W ∘ M` for the Möbius map with matrix `M = [[α, β], [γ, δ]]`.
    pub fn precompose_moebius(&self, m: &Matrix2<Complex64>) -> Result<Self> {
        let n = self.degree;
        let top = [m[(0, 1)], m[(0, 0)]];
        let bottom = [m[(1, 1)], m[(1, 0)]];
        let homogenize = |coeffs: &[Complex64]| {
            let mut acc = vec![Complex64::new(0.0, 0.0); n + 1];
            for (k, &a) in coeffs.iter().enumerate() {
                let term = poly::mul(&poly::pow(&top, k), &poly::pow(&bottom, n - k));
                for (i, t) in term.iter().enumerate() {
                    acc[i] += a * t;
                }
            }
            acc
        };
        let mut coeffs = homogenize(self.numerator());
        coeffs.extend(homogenize(self.denominator()));
        Self::new(n, coeffs)
    }

    /// Applies the same precomposition to a tangent vector given as a
    /// coefficient variation.
    pub fn precompose_tangent(&self, tangent: &[Complex64], m: &Matrix2<Complex64>) -> Result<Vec<Complex64>> {
        let t = RationalMap {
            degree: self.degree,
            coeffs: tangent.to_vec(),
        };
        // `new` would reject an all-zero tangent, which is legitimate here.
        if tangent.iter().all(|c| c.norm_sqr() == 0.0) {
            return Ok(tangent.to_vec());
        }
        Ok(t.precompose_moebius(m)?.coeffs)
    }
}

/// A map with coefficients uniform in the unit square, redrawn until its
/// scaled resultant exceeds `1e-3`.
pub fn random_map(degree: usize, rng: &mut impl rand::Rng) -> RationalMap {
    loop {
        let coeffs = (0..2 * degree + 2)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        if let Ok(m) = RationalMap::new(degree, coeffs) {
            if m.resultant() > 1e-3 {
                return m;
            }
        }
    }
}

/// Deterministic sample points spread over the sphere (a Fibonacci spiral
/// pulled back by stereographic projection), avoiding exactly 0 and ∞.
pub fn sphere_grid(count: usize) -> Vec<Complex64> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|k| {
            let zc = 1.0 - 2.0 * (k as f64 + 0.5) / count as f64;
            let r = (1.0 - zc * zc).sqrt();
            let phi = golden * k as f64;
            // Inverse of (2z, 1 − |z|²)/(1 + |z|²).
            let scale = r / (1.0 + zc);
            Complex64::from_polar(scale, phi)
        })
        .collect()
}
