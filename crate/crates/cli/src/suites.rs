//! Verification suites behind `lumpgeom verify`.

use std::f64::consts::PI;

use nalgebra::Vector3;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use lumpgeom_core::curvature::{positivity_scan, ricci_generators, CurvatureRow};
use lumpgeom_core::dynamics::{geodesic_flow, hamiltonian_flow, reversed, GeodesicOptions, InitialCondition};
use lumpgeom_core::euler::rotation_distance;
use lumpgeom_core::invariant::{character_integrals, positivity_check, verify_closure, verify_hermiticity};
use lumpgeom_core::jet::Jet;
use lumpgeom_core::l2::{energy, frame_gram_by_quadrature, kaehler_symmetry_residual};
use lumpgeom_core::profile::{CoefficientProfile, FubiniStudyProfile, L2Profile};
use lumpgeom_core::rational_maps::{check_rp2_equivariance, random_map, sphere_grid};
use lumpgeom_core::rp2::{build_fixed_map, incompleteness_length, log_ratio_check, n1_fixed_is_unitary, w_rho, FixedSetChart};
use lumpgeom_core::{GeomError, RationalMap, Result, SphereQuadrature};

pub const SUITES: [&str; 7] = ["kaehler", "constraints", "fs", "limits", "characters", "rp2", "dynamics"];

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub expected: Option<f64>,
    pub tolerance: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub checks: Vec<Check>,
}

#[derive(Debug, Default)]
struct Checks(Vec<Check>);

impl Checks {
    fn below(&mut self, name: impl Into<String>, value: f64, tol: f64) {
        self.0.push(Check {
            name: name.into(),
            value,
            expected: None,
            tolerance: tol,
            passed: value < tol,
            note: None,
        });
    }

    fn near(&mut self, name: impl Into<String>, value: f64, expected: f64, tol: f64) {
        self.0.push(Check {
            name: name.into(),
            value,
            expected: Some(expected),
            tolerance: tol,
            passed: (value - expected).abs() < tol,
            note: None,
        });
    }

    fn truth(&mut self, name: impl Into<String>, ok: bool, note: impl Into<String>) {
        self.0.push(Check {
            name: name.into(),
            value: if ok { 1.0 } else { 0.0 },
            expected: Some(1.0),
            tolerance: 0.0,
            passed: ok,
            note: Some(note.into()),
        });
    }

    /// Records an error from a computation as a failed check.
    fn attempt<T>(&mut self, name: &str, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.truth(name, false, e.to_string());
                None
            }
        }
    }

    fn into_report(self, suite: &str) -> SuiteReport {
        SuiteReport {
            suite: suite.into(),
            passed: self.0.iter().all(|c| c.passed),
            checks: self.0,
        }
    }
}

pub struct SuiteConfig {
    pub order: usize,
    pub step: f64,
    pub seed: u64,
}

pub fn parse_suites(text: &str) -> Result<Vec<&'static str>> {
    if text == "all" {
        return Ok(SUITES.to_vec());
    }
    text.split(',')
        .map(|s| {
            SUITES
                .iter()
                .find(|&&n| n == s.trim())
                .copied()
                .ok_or_else(|| GeomError::InvalidInput(format!("unknown suite `{s}`; known: {}", SUITES.join(", "))))
        })
        .collect()
}

pub fn run_suite(name: &str, cfg: &SuiteConfig) -> SuiteReport {
    let mut c = Checks::default();
    match name {
        "kaehler" => kaehler(&mut c, cfg),
        "constraints" => constraints(&mut c),
        "fs" => fubini_study(&mut c),
        "limits" => limits(&mut c, cfg),
        "characters" => characters(&mut c),
        "rp2" => rp2(&mut c, cfg),
        "dynamics" => dynamics(&mut c, cfg),
        other => c.truth("suite", false, format!("unknown suite {other}")),
    }
    c.into_report(name)
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

fn kaehler(c: &mut Checks, cfg: &SuiteConfig) {
    let quad = SphereQuadrature::new(cfg.order);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for (degree, count) in [(1, 10), (2, 5)] {
        for i in 0..count {
            let map = random_map(degree, &mut rng);
            let name = format!("kaehler_residual_degree{degree}_map{i}");
            if let Some(r) = c.attempt(&name, kaehler_symmetry_residual(&map, cfg.step, &quad)) {
                c.below(name, r, 1e-5);
            }
        }
    }
}

fn constraints(c: &mut Checks) {
    let grid = linspace(0.1, 10.0, 100);
    let profiles: [(&str, &dyn CoefficientProfile); 2] = [("l2", &L2Profile), ("fs", &FubiniStudyProfile)];
    for (tag, p) in profiles {
        if let Some(r) = c.attempt("hermiticity", verify_hermiticity(p, &grid)) {
            c.below(format!("{tag}_hermiticity"), r, 1e-8);
        }
        if let Some(r) = c.attempt("closure", verify_closure(p, &grid)) {
            c.below(format!("{tag}_closure"), r.max(), 1e-8);
        }
        let pos = positivity_check(p, &linspace(0.0, 100.0, 1001));
        c.truth(format!("{tag}_metric_positivity"), pos.passed, format!("{:?}", pos.first_failure));
    }
    let scan_grid: Vec<f64> = (0..10_000).map(|i| 10f64.powf(-4.0 + 6.0 * (i as f64 + 1.0) / 10_000.0)).collect();
    if let Some(scan) = c.attempt("curvature_scan", positivity_scan(&L2Profile, &scan_grid)) {
        c.truth("l2_ricci_and_scalar_positive_on_scan", scan.passed(), scan.label.clone());
    }
}

fn fubini_study(c: &mut Checks) {
    let fs = FubiniStudyProfile;
    let mut worst = [0.0f64; 4];
    for l in linspace(0.0, 10.0, 101) {
        match CurvatureRow::at(&fs, l) {
            Ok(r) => {
                worst[0] = worst[0].max((r.hol_e1 - 4.0).abs());
                worst[1] = worst[1].max((r.hol_e3 - 4.0).abs());
                worst[2] = worst[2].max((r.kappa - 48.0).abs());
                worst[3] = worst[3].max((r.abar - 8.0 * r.a).abs());
            }
            Err(e) => c.truth(format!("row_{l}"), false, e.to_string()),
        }
    }
    c.below("max_abs_hol_e1_minus_4", worst[0], 1e-9);
    c.below("max_abs_hol_e3_minus_4", worst[1], 1e-9);
    c.below("max_abs_kappa_minus_48", worst[2], 1e-8);
    c.below("max_abs_abar_minus_8a", worst[3], 1e-9);
}

fn limits(c: &mut Checks, cfg: &SuiteConfig) {
    let p = L2Profile;
    c.near("a_at_0", p.a(0.0), 4.0 * PI / 3.0, 1e-6);
    c.near("b_at_0", p.b(0.0), PI / 3.0, 1e-6);
    if let Some(r) = c.attempt("row_0", CurvatureRow::at(&p, 0.0)) {
        c.near("kappa_at_0", r.kappa, 18.0 / PI, 1e-6);
    }
    if let Some((abar, bbar)) = c.attempt("ricci_small", ricci_generators(&p, 1e-5)) {
        c.near("abar_near_0", abar, 4.0, 1e-4);
        c.near("bbar_near_0", bbar, 1.0, 1e-4);
    }
    c.near("lambda2_a_at_1e3", 1e6 * p.a(1e3), PI, 1e-4);
    if let (Some(r4), Some(r6)) = (
        c.attempt("row_1e4", CurvatureRow::at(&p, 1e4)),
        c.attempt("row_1e6", CurvatureRow::at(&p, 1e6)),
    ) {
        let (d4, d6) = (r4.asymptotic_ratios(), r6.asymptotic_ratios());
        let targets = [4.0, 0.125, 1.0 / (2.0 * PI), 1.0 / (4.0 * PI)];
        let names = ["lambda2_abar", "log2_bbar", "log3_kappa_over_lambda4", "log3_hol_e3_over_lambda4"];
        for k in 0..4 {
            let (e4, e6) = ((d4[k] / targets[k] - 1.0).abs(), (d6[k] / targets[k] - 1.0).abs());
            // λ²Ā approaches 4 only like 1/log λ: 1.3% low at 10⁴.
            let tol = if k == 0 { 0.02 } else { 0.15 };
            c.below(format!("{}_rel_error_at_1e4", names[k]), e4, tol);
            c.truth(format!("{}_closer_at_1e6", names[k]), e6 < e4, format!("{e4:.4e} -> {e6:.4e}"));
        }
    }
    let quad = SphereQuadrature::new(cfg.order);
    for l in [0.1, 0.5, 1.0, 2.0, 5.0] {
        if let Some(g) = c.attempt("gram", frame_gram_by_quadrature(l, &quad)) {
            c.below(format!("quadrature_vs_closed_form_at_{l}"), (g[(0, 0)] / p.a(l) - 1.0).abs(), 1e-6);
        }
    }
    for n in 1..=4 {
        if let Some(e) = c.attempt("energy", energy(&RationalMap::power(n), &quad)) {
            c.near(format!("energy_of_z^{n}"), e, 2.0 * PI * n as f64, 1e-7);
        }
    }
}

fn characters(c: &mut Checks) {
    let v = character_integrals().as_array();
    for (k, (x, e)) in v.iter().zip([7.0, 5.0, 3.0, 1.0]).enumerate() {
        c.near(format!("character_integral_{k}"), *x, e, 1e-10);
    }
}

fn rp2(c: &mut Checks, cfg: &SuiteConfig) {
    let grid = sphere_grid(200);
    let cz = |re: f64, im: f64| Complex64::new(re, im);
    let mut charts = vec![
        FixedSetChart::new(vec![cz(0.0, 1.0)], 0.0),
        FixedSetChart::new(vec![cz(2.0, 0.0), cz(0.0, 3.0), cz(-1.0, 1.0)], PI / 4.0),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for n in [3, 5] {
        let poles = (0..n).map(|_| cz(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))).collect();
        charts.push(FixedSetChart::new(poles, rng.gen_range(0.0..2.0 * PI)));
    }
    for (i, chart) in charts.iter().enumerate() {
        if let Some(m) = c.attempt("build", build_fixed_map(chart)) {
            c.below(
                format!("equivariance_chart{i}_degree{}", chart.degree),
                check_rp2_equivariance(&m, &grid),
                1e-10,
            );
        }
    }
    for rho in [0.5, 0.9, 0.999] {
        if let Some(m) = c.attempt("w_rho", w_rho(3, rho)) {
            c.below(format!("equivariance_curve_rho_{rho}"), check_rp2_equivariance(&m, &grid), 1e-10);
        }
    }
    if let Some(r) = c.attempt("log_ratio", log_ratio_check(3, &[2, 3, 4, 5, 6], 1e-8)) {
        c.truth("log_ratio_bounded", r.bounded, format!("ratios {:?}", r.ratios));
    }
    if let Some(r) = c.attempt("length", incompleteness_length(3, &[2, 3, 4, 5, 6])) {
        c.truth(
            "incompleteness_length_cauchy",
            r.converged,
            format!("extrapolated {}", r.extrapolated),
        );
    }
    let quad = SphereQuadrature::new(cfg.order);
    if let Some(r) = c.attempt("n1", n1_fixed_is_unitary(50, cfg.seed, &quad)) {
        c.below("n1_unitarity", r.unitarity_residual, 1e-10);
        c.below("n1_fixed", r.fixed_residual, 1e-10);
        c.below("n1_gram_is_a3_at_0", r.gram_residual, 1e-6);
        c.below("n1_density_variance", r.density_variance, 1e-10);
    }
}

fn dynamics(c: &mut Checks, cfg: &SuiteConfig) {
    let p = L2Profile;
    let opts = GeodesicOptions::default();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut v3 = |s: f64| [rng.gen_range(-s..s), rng.gen_range(-s..s), rng.gen_range(-s..s)];
    for i in 0..3 {
        let mut lambda = v3(1.1);
        let n = Vector3::from(lambda).norm();
        if n > 2.0 {
            lambda = lambda.map(|x| x * 2.0 / n);
        }
        let ic = InitialCondition {
            lambda,
            rotation: v3(3.0),
            lambda_dot: v3(0.5),
            omega: v3(1.0),
        };
        let Some(s0) = c.attempt("initial", ic.to_state()) else { continue };
        let Some(fwd) = c.attempt("geodesic", geodesic_flow(&p, &s0, 1.0, &opts)) else {
            continue;
        };
        c.below(format!("energy_drift_{i}"), fwd.max_energy_drift(), 1e-6);
        c.below(format!("charge_drift_{i}"), fwd.max_charge_drift(), 1e-5);
        if let Some(back) = c.attempt("reverse", geodesic_flow(&p, &reversed(&fwd.last().state), 1.0, &opts)) {
            let e = back.last().state;
            let err = (e.lambda() - s0.lambda())
                .norm()
                .max(rotation_distance(&e.unitary(), &s0.unitary()));
            c.below(format!("time_reversal_{i}"), err, 1e-5);
        }
    }
    let radial = InitialCondition {
        lambda: [0.0, 0.0, 1.0],
        rotation: [0.2, 0.1, 0.3],
        lambda_dot: [0.0, 0.0, 0.7],
        omega: [0.0; 3],
    };
    if let Some(tr) = c.attempt("radial", radial.to_state().and_then(|s| geodesic_flow(&p, &s, 1.0, &opts))) {
        let dev = tr
            .samples
            .iter()
            .map(|s| (s.state.lambda().normalize() - Vector3::z()).norm())
            .fold(0.0, f64::max);
        c.below("radial_direction_fixed", dev, 1e-6);
    }
    let orbit = InitialCondition {
        lambda: [0.0; 3],
        rotation: [0.2, 0.1, 0.3],
        lambda_dot: [0.0; 3],
        omega: [0.0, 0.0, 1.0],
    };
    if let Some(tr) = c.attempt("orbit", orbit.to_state().and_then(|s| geodesic_flow(&p, &s, 1.0, &opts))) {
        let max = tr.samples.iter().map(|s| s.state.lambda().norm()).fold(0.0, f64::max);
        c.below("rotation_orbit_stays_at_lambda_0", max, 1e-6);
    }
    let ham = InitialCondition {
        lambda: [0.6, 0.0, 0.8],
        rotation: [0.4, -0.2, 0.1],
        lambda_dot: [0.0; 3],
        omega: [0.0; 3],
    };
    let h = |l: Jet| l * l * 0.5;
    if let Some(tr) = c.attempt("hamiltonian", ham.to_state().and_then(|s| hamiltonian_flow(&p, &h, &s, 10.0, 200))) {
        let l0 = tr.samples[0].state.lambda().norm();
        let h0 = tr.samples[0].conserved.hamiltonian.unwrap_or(f64::NAN);
        let dl = tr.samples.iter().map(|s| (s.state.lambda().norm() - l0).abs()).fold(0.0, f64::max);
        let dh = tr
            .samples
            .iter()
            .map(|s| (s.conserved.hamiltonian.unwrap_or(f64::NAN) - h0).abs())
            .fold(0.0, f64::max);
        c.below("hamiltonian_lambda_drift", dl, 1e-10);
        c.below("hamiltonian_value_drift", dh, 1e-10);
    }
}
