//! The antiholomorphic involution `𝖯(W) = p ∘ W ∘ p`, `p(z) = −1/z̄`, whose
//! fixed maps descend to harmonic maps RP² → RP².

use num_complex::Complex64;

use super::rational::RationalMap;
use crate::sphere::chordal_distance;

/// `𝖯` on coefficients:
/// `[a₁,…,a_{2n+2}] ↦ [(−1)ⁿā_{2n+2}, (−1)^{n−1}ā_{2n+1}, …, ā_{n+2},
///  (−1)^{n+1}ā_{n+1}, (−1)ⁿā_n, …, −ā₁]`.
pub fn antipodal_involution(map: &RationalMap) -> RationalMap {
    let n = map.degree();
    let num = map.numerator();
    let den = map.denominator();
    let sign = |k: usize| if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut coeffs = Vec::with_capacity(2 * n + 2);
    // New numerator, coefficient of z^j: (−1)^{n−j} conj(den[n−j]).
    for j in 0..=n {
        coeffs.push(den[n - j].conj() * sign(n - j));
    }
    // New denominator, coefficient of z^j: −(−1)^{n−j} conj(num[n−j]).
    for j in 0..=n {
        coeffs.push(-num[n - j].conj() * sign(n - j));
    }
    RationalMap::new(n, coeffs).expect("involution preserves a nonzero coefficient vector")
}

/// Max chordal distance between `W(−1/z̄)` and `p(W(z))` over the grid.
///
/// This tests the composition condition `W ∘ p = p ∘ W` directly; a value at
/// rounding level certifies membership of the RP² moduli space at the
/// resolution of the grid.
pub fn check_rp2_equivariance(map: &RationalMap, grid: &[Complex64]) -> f64 {
    grid.iter()
        .map(|&z| {
            let z = crate::sphere::ExtendedComplex::Finite(z);
            chordal_distance(map.evaluate(z.antipode()), map.evaluate(z).antipode())
        })
        .fold(0.0, f64::max)
}

/// Convenience predicate around [`check_rp2_equivariance`].
pub fn is_rp2_equivariant(map: &RationalMap, grid: &[Complex64], tol: f64) -> bool {
    check_rp2_equivariance(map, grid) <= tol
}
