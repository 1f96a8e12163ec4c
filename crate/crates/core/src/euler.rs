//! ZYZ Euler coordinates on `SU(2)` relative to a base rotation, and the
//! left-invariant coframe `σ_a = −i tr(τ_a U†dU)` in those coordinates.

use std::f64::consts::PI;

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;

use crate::rational_maps::{pauli, su2_exp, CMat2};

/// `exp(iφτ₃/2) exp(iθτ₂/2) exp(iψτ₃/2)`.
pub fn euler_zyz(angles: [f64; 3]) -> CMat2 {
    let [phi, theta, psi] = angles;
    su2_exp(&Vector3::new(0.0, 0.0, phi)) * su2_exp(&Vector3::new(0.0, theta, 0.0)) * su2_exp(&Vector3::new(0.0, 0.0, psi))
}

/// Partial derivatives of [`euler_zyz`] with respect to `(φ, θ, ψ)`.
pub fn euler_partials(angles: [f64; 3]) -> [CMat2; 3] {
    let [phi, theta, psi] = angles;
    let a = su2_exp(&Vector3::new(0.0, 0.0, phi));
    let b = su2_exp(&Vector3::new(0.0, theta, 0.0));
    let c = su2_exp(&Vector3::new(0.0, 0.0, psi));
    let half_i = Complex64::new(0.0, 0.5);
    let t2 = pauli(1) * half_i;
    let t3 = pauli(2) * half_i;
    [t3 * a * b * c, a * t2 * b * c, a * b * c * t3]
}

/// `E[a][j] = σ_a(∂/∂angle_j)`; independent of any left factor.
pub fn coframe_matrix(angles: [f64; 3]) -> Matrix3<f64> {
    let ud = euler_zyz(angles).adjoint();
    let parts = euler_partials(angles);
    // tr(τ_a U†∂U) is purely imaginary; −i times it is its imaginary part.
    Matrix3::from_fn(|a, j| (pauli(a) * ud * parts[j]).trace().im)
}

/// `|det E|`, the Euler-angle density of `σ₁∧σ₂∧σ₃`.
pub fn volume_density(angles: [f64; 3]) -> f64 {
    coframe_matrix(angles).determinant().abs()
}

/// Angles of `V = exp(iφτ₃/2) exp(iθτ₂/2) exp(iψτ₃/2)` (up to sign),
/// with `θ ∈ [0, π]`. The split of `φ ± ψ` is arbitrary when `θ` is 0 or π.
pub fn euler_angles_of(v: &CMat2) -> [f64; 3] {
    let (p, q) = (v[(0, 0)], v[(0, 1)]);
    let theta = 2.0 * q.norm().atan2(p.norm());
    let sum = 2.0 * p.arg();
    let diff = 2.0 * q.arg();
    [0.5 * (sum + diff), theta, 0.5 * (sum - diff)]
}

/// Shifts `φ` and `ψ` by multiples of 2π to lie closest to `reference`.
pub fn unwrap_towards(angles: [f64; 3], reference: [f64; 3]) -> [f64; 3] {
    let mut out = angles;
    for k in [0, 2] {
        let d = out[k] - reference[k];
        out[k] -= (d / (2.0 * PI)).round() * 2.0 * PI;
    }
    out
}

/// Base rotations of the two overlapping charts: the identity and a
/// quarter turn about the first axis.
pub fn chart_base(chart: usize) -> CMat2 {
    match chart {
        0 => CMat2::identity(),
        _ => su2_exp(&Vector3::new(PI / 2.0, 0.0, 0.0)),
    }
}

/// Geodesic distance for the bi-invariant metric `σ·σ` on SO(3): the
/// rotation angle of `U†V`, in `[0, π]`.
pub fn rotation_distance(u: &CMat2, v: &CMat2) -> f64 {
    let t = (u.adjoint() * v).trace().re.abs() / 2.0;
    2.0 * t.min(1.0).acos()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coframe_along_subgroups() {
        // At θ = 0 both φ and ψ move along τ₃.
        let e = coframe_matrix([0.3, 0.0, 0.2]);
        assert!((e[(2, 0)] - 1.0).abs() < 1e-14 && (e[(2, 2)] - 1.0).abs() < 1e-14);
        assert!((volume_density([0.1, 1.0, 0.4]) - 1f64.sin()).abs() < 1e-14);
    }

    #[test]
    fn angles_round_trip() {
        for angles in [[0.3, 1.2, -0.7], [2.0, 0.4, 1.0], [-1.0, 2.9, 0.5]] {
            let v = euler_zyz(angles);
            let back = unwrap_towards(euler_angles_of(&v), angles);
            let w = euler_zyz(back);
            assert!(crate::rational_maps::projective_matrix_distance(&v, &w) < 1e-14);
            assert!((back[1] - angles[1]).abs() < 1e-13);
        }
    }
}
