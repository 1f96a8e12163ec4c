//! Independent checks of closed forms: each oracle integrates the defining
//! sphere integral for a concrete family of maps with its own reduction to
//! one dimension.

use std::f64::consts::PI;

use lumpgeom_core::global::{gamma_length, so3_volume};
use lumpgeom_core::invariant::character_integrals;
use lumpgeom_core::l2::{energy, frame_gram_by_quadrature};
use lumpgeom_core::profile::{mu_of_lambda, CoefficientProfile, FubiniStudyProfile, L2Profile};
use lumpgeom_core::quadrature::gauss_legendre_on;
use lumpgeom_core::{RationalMap, SphereQuadrature};

/// `∫₀^∞ f(u) du` through `u = eˢ`, unit panels on `[lo, hi]`.
fn half_line(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    let mut total = 0.0;
    let mut s = lo;
    while s < hi {
        for (x, w) in gauss_legendre_on(24, s, s + 1.0) {
            let u = x.exp();
            total += w * u * f(u);
        }
        s += 1.0;
    }
    total
}

/// Transverse frame direction at the dilation `z ↦ μz`: the variation
/// `δW = c − d z²` averages over angle to `c² + d²|z|⁴`.
fn a_oracle(lambda: f64) -> f64 {
    let big = (1.0 + lambda * lambda).sqrt();
    let mu = mu_of_lambda(lambda).unwrap();
    let c = 1.0 / (big - lambda);
    let d = mu * c;
    2.0 * PI
        * half_line(
            |u| (c * c + d * d * u * u) / ((1.0 + u).powi(2) * (1.0 + mu * mu * u).powi(2)),
            -60.0,
            60.0,
        )
}

/// Spin about the axis: `δW = iμz`.
fn b_oracle(lambda: f64) -> f64 {
    let mu = mu_of_lambda(lambda).unwrap();
    2.0 * PI * half_line(|u| mu * mu * u / ((1.0 + u).powi(2) * (1.0 + mu * mu * u).powi(2)), -60.0, 60.0)
}

/// `‖∂_μ‖²` along the dilations.
fn dilation_speed_squared(mu: f64) -> f64 {
    2.0 * PI * half_line(|u| u / ((1.0 + u).powi(2) * (1.0 + mu * mu * u).powi(2)), -60.0, 60.0)
}

#[test]
fn l2_generators_match_direct_integrals() {
    for l in [0.0, 0.05, 0.2, 0.5, 1.0, 2.0, 5.0, 20.0, 100.0] {
        let (a, b) = (L2Profile.a(l), L2Profile.b(l));
        assert!((a / a_oracle(l) - 1.0).abs() < 1e-11, "A at {l}: {a} vs {}", a_oracle(l));
        assert!((b / b_oracle(l) - 1.0).abs() < 1e-11, "B at {l}: {b} vs {}", b_oracle(l));
    }
}

#[test]
fn generators_at_the_round_map() {
    // ∫(1+u²)/(1+u)⁴ = 2/3 and ∫u/(1+u)⁴ = 1/6
    assert!((L2Profile.a(0.0) - 4.0 * PI / 3.0).abs() < 1e-13);
    assert!((L2Profile.b(0.0) - PI / 3.0).abs() < 1e-13);
    assert!((a_oracle(0.0) - 4.0 * PI / 3.0).abs() < 1e-12);
    assert!((b_oracle(0.0) - PI / 3.0).abs() < 1e-12);
}

#[test]
fn radial_gram_entry_matches_dilation_speed() {
    let quad = SphereQuadrature::new(64);
    for l in [0.1, 0.7, 2.0] {
        let g = frame_gram_by_quadrature(l, &quad).unwrap();
        let big = (1.0 + l * l).sqrt();
        let mu = mu_of_lambda(l).unwrap();
        let dmu = 2.0 * (big + l) * (1.0 + l / big);
        let oracle = dmu * dmu * dilation_speed_squared(mu);
        assert!((g[(2, 2)] / oracle - 1.0).abs() < 1e-9, "{} vs {oracle}", g[(2, 2)]);
    }
}

#[test]
fn gamma_length_matches_dilation_integral() {
    // L = ∫₁^∞ ‖∂_μ‖ dμ, in x = log μ
    let mut oracle = 0.0;
    for p in 0..60 {
        for (x, w) in gauss_legendre_on(24, p as f64, p as f64 + 1.0) {
            let mu = x.exp();
            oracle += w * mu * dilation_speed_squared(mu).sqrt();
        }
    }
    let l = gamma_length(&L2Profile).unwrap();
    assert!((l - oracle).abs() < 1e-9, "{l} vs {oracle}");
}

#[test]
fn fubini_study_gamma_length_is_an_eighth_turn() {
    // [√μ : 0 : 0 : 1/√μ] runs from (1,0,0,1)/√2 to (1,0,0,0) in CP³
    let l = gamma_length(&FubiniStudyProfile).unwrap();
    assert!((l - PI / 4.0).abs() < 1e-9, "{l}");
}

#[test]
fn energy_of_power_maps() {
    // 2∫|W'|²/(1+|W|²)² dxdy for zⁿ reduces to 2πn∫ dv/(1+v)² with v = r²ⁿ
    let quad = SphereQuadrature::new(64);
    for n in 1..=4 {
        let oracle = 2.0 * PI * n as f64 * half_line(|v| 1.0 / (1.0 + v).powi(2), -60.0, 60.0);
        let e = energy(&RationalMap::power(n), &quad).unwrap();
        assert!((e - oracle).abs() < 1e-9, "n={n}: {e} vs {oracle}");
    }
}

#[test]
fn character_integrals_by_trapezoid() {
    // the rule is exact for trigonometric polynomials of this degree
    let m = 64;
    let nodes: Vec<f64> = (0..m).map(|k| 2.0 * PI * k as f64 / m as f64).collect();
    let plus = |p: f64| 7.0 + 8.0 * p.cos() + 6.0 * (2.0 * p).cos();
    let minus = |p: f64| 5.0 + 8.0 * p.cos() + 2.0 * (2.0 * p).cos();
    let avg = |f: &dyn Fn(f64) -> f64| nodes.iter().map(|&p| f(p)).sum::<f64>() / m as f64;
    let class = |f: &dyn Fn(f64) -> f64| 2.0 * avg(&|p| f(p) * (0.5 * p).sin().powi(2));
    let oracle = [avg(&plus), avg(&minus), class(&plus), class(&minus)];
    let got = character_integrals().as_array();
    for k in 0..4 {
        assert!((got[k] - oracle[k]).abs() < 1e-12, "{k}: {} vs {}", got[k], oracle[k]);
    }
}

#[test]
fn haar_volume_in_euler_angles() {
    // ∫ sinθ over θ ∈ [0,π], φ, ψ ∈ [0,2π]
    assert!((so3_volume() - 2.0 * 2.0 * PI * 2.0 * PI).abs() < 1e-9);
}
