//! Points of the Riemann sphere in the stereographic coordinate and the
//! chordal distance used to compare map values.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A finite complex number or the point at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ExtendedComplex {
    Finite(Complex64),
    Infinity,
}

impl ExtendedComplex {
    pub fn finite(re: f64, im: f64) -> Self {
        ExtendedComplex::Finite(Complex64::new(re, im))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtendedComplex::Infinity)
    }

    pub fn as_finite(&self) -> Option<Complex64> {
        match *self {
            ExtendedComplex::Finite(z) => Some(z),
            ExtendedComplex::Infinity => None,
        }
    }

    /// `1/z` with `1/0 = ∞` and `1/∞ = 0`.
    pub fn recip(self) -> Self {
        match self {
            ExtendedComplex::Infinity => ExtendedComplex::Finite(Complex64::new(0.0, 0.0)),
            ExtendedComplex::Finite(z) if z.norm_sqr() == 0.0 => ExtendedComplex::Infinity,
            ExtendedComplex::Finite(z) => ExtendedComplex::Finite(z.inv()),
        }
    }

    pub fn conj(self) -> Self {
        match self {
            ExtendedComplex::Finite(z) => ExtendedComplex::Finite(z.conj()),
            inf => inf,
        }
    }

    /// The antipodal map `z ↦ −1/z̄`.
    pub fn antipode(self) -> Self {
        -self.conj().recip()
    }

    /// Quotient `num/den`, total on the sphere except for `0/0`, which is
    /// reported as infinity.
    pub fn ratio(num: Complex64, den: Complex64) -> Self {
        if den.norm_sqr() == 0.0 {
            ExtendedComplex::Infinity
        } else {
            ExtendedComplex::Finite(num / den)
        }
    }

    /// Unit vector in R^3 under inverse stereographic projection from the
    /// south pole convention `z ↦ (2z, 1 − |z|²)/(1 + |z|²)`.
    pub fn to_unit_vector(self) -> [f64; 3] {
        match self {
            ExtendedComplex::Infinity => [0.0, 0.0, -1.0],
            ExtendedComplex::Finite(z) => {
                let r2 = z.norm_sqr();
                let d = 1.0 + r2;
                [2.0 * z.re / d, 2.0 * z.im / d, (1.0 - r2) / d]
            }
        }
    }
}

impl From<Complex64> for ExtendedComplex {
    fn from(z: Complex64) -> Self {
        ExtendedComplex::Finite(z)
    }
}

/// Chordal distance on the unit sphere, `2|a − b| / sqrt((1+|a|²)(1+|b|²))`,
/// extended continuously to infinity. Takes values in `[0, 2]`.
pub fn chordal_distance(a: ExtendedComplex, b: ExtendedComplex) -> f64 {
    use ExtendedComplex::*;
    match (a, b) {
        (Infinity, Infinity) => 0.0,
        (Finite(w), Infinity) | (Infinity, Finite(w)) => 2.0 / (1.0 + w.norm_sqr()).sqrt(),
        (Finite(u), Finite(v)) => 2.0 * (u - v).norm() / ((1.0 + u.norm_sqr()) * (1.0 + v.norm_sqr())).sqrt(),
    }
}

impl std::ops::Neg for ExtendedComplex {
    type Output = Self;

    fn neg(self) -> Self {
        match self {
            ExtendedComplex::Finite(z) => ExtendedComplex::Finite(-z),
            inf => inf,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reciprocal_is_total() {
        assert!(ExtendedComplex::finite(0.0, 0.0).recip().is_infinite());
        assert_eq!(ExtendedComplex::Infinity.recip(), ExtendedComplex::finite(0.0, 0.0));
    }

    #[test]
    fn chordal_matches_euclidean_chord() {
        let a = ExtendedComplex::finite(0.3, -1.2);
        let b = ExtendedComplex::finite(-2.0, 0.5);
        let (u, v) = (a.to_unit_vector(), b.to_unit_vector());
        let chord = ((u[0] - v[0]).powi(2) + (u[1] - v[1]).powi(2) + (u[2] - v[2]).powi(2)).sqrt();
        assert!((chord - chordal_distance(a, b)).abs() < 1e-14);
        let inf = ExtendedComplex::Infinity;
        let w = inf.to_unit_vector();
        let chord = ((u[0] - w[0]).powi(2) + (u[1] - w[1]).powi(2) + (u[2] - w[2]).powi(2)).sqrt();
        assert!((chord - chordal_distance(a, inf)).abs() < 1e-14);
    }

    #[test]
    fn antipode_is_an_involution_without_fixed_points() {
        let z = ExtendedComplex::finite(0.7, 0.2);
        let p = z.antipode();
        assert!(chordal_distance(p.antipode(), z) < 1e-15);
        assert!((chordal_distance(z, p) - 2.0).abs() < 1e-14);
    }
}
