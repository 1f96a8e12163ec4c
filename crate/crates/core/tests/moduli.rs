//! RP² fixed sets, Hamiltonian flows and chart handling on concrete cases.

use num_complex::Complex64;

use lumpgeom_core::dynamics::{
    geodesic_flow, hamiltonian_vector_field, hamiltonian_vector_field_coordinates, spin_rate_kaehler, spin_rate_rational, GeodesicOptions,
    InitialCondition,
};
use lumpgeom_core::profile::{FubiniStudyProfile, L2Profile};
use lumpgeom_core::rp2::{
    build_fixed_map, f_rho, fixed_set_rank, incompleteness_length, lagrangian_residual, n1_fixed_is_unitary, w_rho, w_rho_tangent,
    FixedSetChart,
};
use lumpgeom_core::{GeomError, SphereQuadrature};

fn cz(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn even_degrees_have_no_fixed_maps() {
    for n in [2, 4] {
        let chart = FixedSetChart::new(vec![cz(1.5, 0.5); n], 0.0);
        assert!(matches!(build_fixed_map(&chart), Err(GeomError::NoFixedPoints(_))));
        assert!(matches!(
            w_rho(n, 0.5),
            Err(GeomError::NoFixedPoints(_)) | Err(GeomError::InvalidInput(_))
        ));
    }
}

#[test]
fn pole_on_a_zero_is_degenerate() {
    // the zero belonging to the pole 2 sits at −1/2
    let chart = FixedSetChart::new(vec![cz(2.0, 0.0), cz(-0.5, 0.0), cz(0.3, 1.0)], 0.0);
    assert!(matches!(build_fixed_map(&chart), Err(GeomError::Degenerate(_))));
    let repeated = FixedSetChart::new(vec![cz(1.0, 1.0), cz(1.0, 1.0), cz(-2.0, 0.5)], 0.0);
    assert!(build_fixed_map(&repeated).is_ok());
}

#[test]
fn fixed_set_is_lagrangian_of_half_dimension() {
    let quad = SphereQuadrature::new(64);
    let chart = FixedSetChart::new(vec![cz(1.3, 0.4), cz(-0.8, 1.1), cz(0.2, -1.7)], 0.7);
    assert!(lagrangian_residual(&chart, &quad).unwrap() < 1e-8);
    // a fixed set of real dimension 2n+1 = 7 inside the 14-dimensional space
    assert_eq!(fixed_set_rank(&chart, &quad, 1e-8).unwrap(), 7);
    let one = FixedSetChart::new(vec![cz(0.5, 0.5)], 0.2);
    assert_eq!(fixed_set_rank(&one, &quad, 1e-8).unwrap(), 3);
}

#[test]
fn degree_one_fixed_maps_are_rotations() {
    let r = n1_fixed_is_unitary(50, 7, &SphereQuadrature::new(64)).unwrap();
    assert!(r.passed(1e-10, 1e-6), "{r:?}");
}

#[test]
fn curve_tangent_matches_difference_quotient() {
    let (n, rho, h) = (3, 0.7, 1e-6);
    let t = w_rho_tangent(n, rho).unwrap();
    let (p, m) = (w_rho(n, rho + h).unwrap(), w_rho(n, rho - h).unwrap());
    for (k, tk) in t.iter().enumerate() {
        let fd = (p.coefficients()[k] - m.coefficients()[k]) / (2.0 * h);
        assert!((tk - fd).norm() < 1e-8, "{k}: {tk} vs {fd}");
    }
}

#[test]
fn curve_speed_grows_logarithmically() {
    let f = |k: i32| f_rho(3, 1.0 - 10f64.powi(-k), 1e-8).unwrap();
    let (f2, f4, f6) = (f(2), f(4), f(6));
    // equal steps in log(1/(1−ρ)) give roughly equal increments
    let (d1, d2) = (f4 - f2, f6 - f4);
    assert!(d1 > 0.0 && d2 > 0.0 && (d2 / d1 - 1.0).abs() < 0.2, "{f2} {f4} {f6}");
    assert!((f_rho(3, 0.5, 1e-9).unwrap() - 7.9798244074).abs() < 1e-8);
}

#[test]
fn curve_reaches_the_boundary_in_finite_length() {
    let r3 = incompleteness_length(3, &[2, 3, 4, 5, 6]).unwrap();
    let r5 = incompleteness_length(5, &[2, 3, 4, 5, 6]).unwrap();
    assert!(r3.converged && r5.converged);
    assert!(r3.extrapolated.is_finite() && r3.extrapolated <= r3.log_bound);
    assert!(r3.partial.values.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn three_spin_rates_agree() {
    for p in [&L2Profile as &dyn lumpgeom_core::profile::CoefficientProfile, &FubiniStudyProfile] {
        for l in [0.2, 1.0, 3.0, 10.0] {
            let w = hamiltonian_vector_field(p, 1.3, l);
            assert!((spin_rate_rational(p, 1.3, l) / w - 1.0).abs() < 1e-10);
            assert!((spin_rate_kaehler(p, 1.3, l).unwrap() / w - 1.0).abs() < 1e-10);
        }
    }
}

#[test]
fn coordinate_hamiltonian_field_is_a_spin() {
    let s = InitialCondition {
        lambda: [0.3, -0.4, 1.2],
        rotation: [0.5, 0.9, -0.3],
        lambda_dot: [0.0; 3],
        omega: [0.0; 3],
    }
    .to_state()
    .unwrap();
    let x = hamiltonian_vector_field_coordinates(&L2Profile, 0.8, &s.x).unwrap();
    // no λ motion
    assert!(x[0].abs() + x[1].abs() + x[2].abs() < 1e-10, "{x}");
    assert!(x.norm() > 0.0);
}

#[test]
fn geodesic_crosses_euler_chart_boundary() {
    // start close to θ = 0 and spin about an axis that passes through it
    let ic = InitialCondition {
        lambda: [0.2, 0.1, 0.4],
        rotation: [0.05, 0.0, 0.0],
        lambda_dot: [0.0; 3],
        omega: [3.0, 0.0, 0.0],
    };
    let tr = geodesic_flow(&L2Profile, &ic.to_state().unwrap(), 1.0, &GeodesicOptions::default()).unwrap();
    assert!(tr.max_energy_drift() < 1e-6);
    assert!(tr.max_charge_drift() < 1e-5);
}

#[test]
fn negative_lambda_is_rejected() {
    assert!(matches!(
        lumpgeom_core::profile::mu_of_lambda(-1.0),
        Err(GeomError::InvalidInput(_))
    ));
}
