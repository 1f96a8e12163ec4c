//! Limiting values of the curvature generators near the round map and far
//! out along the shape parameter.

use std::f64::consts::PI;

use lumpgeom_core::curvature::{ricci_generators, CurvatureRow};
use lumpgeom_core::profile::{CoefficientProfile, L2Profile};

fn rel(x: f64, target: f64) -> f64 {
    (x / target - 1.0).abs()
}

#[test]
fn ricci_generators_at_round_map() {
    let (abar, bbar) = ricci_generators(&L2Profile, 1e-5).unwrap();
    assert!((abar - 4.0).abs() < 1e-4, "{abar}");
    assert!((bbar - 1.0).abs() < 1e-4, "{bbar}");
}

#[test]
fn scalar_curvature_at_round_map() {
    let r = CurvatureRow::at(&L2Profile, 0.0).unwrap();
    assert!((r.kappa - 18.0 / PI).abs() < 1e-6, "{}", r.kappa);
}

#[test]
fn a_decays_like_pi_over_lambda_squared() {
    assert!((1e6 * L2Profile.a(1e3) - PI).abs() < 1e-4);
    // and the error shrinks further out
    let err = |l: f64| (l * l * L2Profile.a(l) - PI).abs();
    assert!(err(1e5) < err(1e3));
}

#[test]
fn logarithmic_rates_within_fifteen_percent_and_improving() {
    let d4 = CurvatureRow::at(&L2Profile, 1e4).unwrap().asymptotic_ratios();
    let d6 = CurvatureRow::at(&L2Profile, 1e6).unwrap().asymptotic_ratios();
    let targets = [4.0, 0.125, 1.0 / (2.0 * PI), 1.0 / (4.0 * PI)];
    for k in 0..4 {
        assert!(rel(d4[k], targets[k]) < 0.15, "{k}: {}", d4[k]);
        assert!(rel(d6[k], targets[k]) < rel(d4[k], targets[k]), "{k}");
    }
}

#[test]
fn abar_approaches_four_slowly() {
    // λ²Ā − 4 ~ 1/log λ: halving the error needs squaring λ
    let e = |l: f64| rel(CurvatureRow::at(&L2Profile, l).unwrap().asymptotic_ratios()[0], 4.0);
    let (e4, e8) = (e(1e4), e(1e8));
    assert!(e4 < 0.02 && e8 < e4);
    assert!((e8 / e4 - 0.5).abs() < 0.1, "{e4} {e8}");
}

#[test]
#[ignore = "λ²Ā is still 1.3% below 4 at λ = 1e4; the convergence is logarithmic"]
fn abar_within_one_percent_at_1e4() {
    let r = CurvatureRow::at(&L2Profile, 1e4).unwrap();
    assert!(rel(r.asymptotic_ratios()[0], 4.0) < 0.01);
}

fn hol_e1_at(l: f64) -> f64 {
    CurvatureRow::at(&L2Profile, l).unwrap().hol_e1
}

#[test]
fn hol_e1_tends_to_one_over_pi() {
    let ratio = |l: f64| hol_e1_at(l) * PI;
    for l in [1e3f64, 1e5, 1e8] {
        let predicted = 1.0 + 1.0 / (4.0 * l.ln());
        assert!((ratio(l) / predicted - 1.0).abs() < 5e-3, "{l}: {} vs {predicted}", ratio(l));
    }
    assert!((ratio(1e8) - 1.0).abs() < (ratio(1e3) - 1.0).abs());
}

#[test]
#[ignore = "Hol(e1) is 3.5% above 1/π at λ = 1e3; the correction is 1/(4 log λ)"]
fn hol_e1_within_1e3_of_one_over_pi_at_1e3() {
    assert!((hol_e1_at(1e3) - 1.0 / PI).abs() < 1e-3);
}
