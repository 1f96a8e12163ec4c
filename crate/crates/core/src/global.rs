//! Global integrals over the degree-one moduli space: total volume, the
//! length of the radial curve, a diameter bound, and the collapse of the
//! `θ₃` fibres at large `λ`.
//!
//! Improper integrals are split at `μ = 2`; the tail uses `t = 1/μ` on
//! geometric panels shrinking towards `t = 0`.

use std::f64::consts::PI;

use nalgebra::Vector3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{GeomError, Result};
use crate::euler::{rotation_distance, volume_density};
use crate::invariant::coefficients_from_a;
use crate::profile::{big_lambda, lambda_of_mu, CoefficientProfile};
use crate::quadrature::gauss_legendre_on;
use crate::rational_maps::su2_exp;
use crate::refine::RefinementSequence;
use crate::sum::CompensatedSum;
use crate::table::Table;

/// Gauss–Legendre order per panel used by the default entry points.
pub const DEFAULT_PANEL_ORDER: usize = 32;
/// Orders used for refinement checks.
pub const REFINEMENT_ORDERS: [usize; 4] = [4, 8, 16, 32];
/// The tail panels stop at this `t = 1/μ`.
pub const TAIL_CUTOFF: f64 = 1e-16;
/// Ratio between consecutive tail breakpoints.
pub const TAIL_RATIO: f64 = 0.25;
/// The innermost tail panel may hold at most this fraction of the total.
pub const TAIL_TOLERANCE: f64 = 1e-10;
/// Above this `λ` the length integrand uses `2√B/Λ`, which equals
/// `√(A₁+λ²A₂)` but avoids the cancellation between `A` and `λA'`.
pub const LENGTH_FORM_SWITCH: f64 = 20.0;

/// Volume of SO(3) for the coframe `c·σ`, by Euler-angle quadrature with
/// `order` Gauss nodes per angle.
pub fn so3_volume_scaled(order: usize, scale: f64) -> f64 {
    let phi = gauss_legendre_on(order, 0.0, 2.0 * PI);
    let theta = gauss_legendre_on(order, 0.0, PI);
    let mut acc = CompensatedSum::new();
    for &(a, wa) in &phi {
        for &(b, wb) in &theta {
            for &(c, wc) in &phi {
                acc.add(wa * wb * wc * volume_density([a, b, c]));
            }
        }
    }
    acc.value() * scale.abs().powi(3)
}

/// Volume of SO(3) with `σ₁∧σ₂∧σ₃`, `dσ₁ = σ₂∧σ₃`; equals 8π².
pub fn so3_volume() -> f64 {
    so3_volume_scaled(DEFAULT_PANEL_ORDER, 1.0)
}

/// A half-line integral split into a head on `μ ∈ [1, 2]` and a tail in
/// `t = 1/μ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SplitIntegral {
    pub head: f64,
    pub tail: f64,
    /// Contribution of the innermost tail panel.
    pub tail_remainder: f64,
    pub order: usize,
}

impl SplitIntegral {
    pub fn value(&self) -> f64 {
        self.head + self.tail
    }
}

fn tail_breaks() -> Vec<f64> {
    let mut breaks = vec![0.5];
    while *breaks.last().unwrap() > TAIL_CUTOFF {
        let next = breaks.last().unwrap() * TAIL_RATIO;
        breaks.push(next);
    }
    breaks
}

/// `∫₁^∞ f(μ) dμ` with the tail written as `∫ f(1/t)/t² dt`.
fn integrate_mu(f: impl Fn(f64) -> f64, order: usize) -> Result<SplitIntegral> {
    let mut head = CompensatedSum::new();
    for (mu, w) in gauss_legendre_on(order, 1.0, 2.0) {
        head.add(w * f(mu));
    }
    let mut tail = CompensatedSum::new();
    let mut last = 0.0;
    for pair in tail_breaks().windows(2) {
        let mut panel = CompensatedSum::new();
        for (t, w) in gauss_legendre_on(order, pair[1], pair[0]) {
            panel.add(w * f(1.0 / t) / (t * t));
        }
        last = panel.value();
        tail.add(last);
    }
    let out = SplitIntegral {
        head: head.value(),
        tail: tail.value(),
        tail_remainder: last.abs(),
        order,
    };
    let total = out.value();
    if !total.is_finite() || !out.tail_remainder.is_finite() || out.tail_remainder > TAIL_TOLERANCE * total.abs() {
        return Err(GeomError::Divergent {
            tail: out.tail_remainder,
            tolerance: TAIL_TOLERANCE * total.abs(),
        });
    }
    Ok(out)
}

/// `∫₀^∞ (Λ/2) B A² λ² dλ`, evaluated as `(1/64)∫₁^∞ (μ − 1/μ)² B A² dμ/μ`.
pub fn radial_volume_integral(profile: &dyn CoefficientProfile, order: usize) -> Result<SplitIntegral> {
    integrate_mu(
        |mu| {
            let l = lambda_of_mu(mu);
            let a = profile.a(l);
            let s = mu - 1.0 / mu;
            s * s * profile.b(l) * a * a / (64.0 * mu)
        },
        order,
    )
}

/// `4π·Vol(SO(3))·∫₀^∞ (Λ/2) B A² λ² dλ` at a given panel order.
pub fn total_volume_with(profile: &dyn CoefficientProfile, order: usize) -> Result<f64> {
    Ok(4.0 * PI * so3_volume() * radial_volume_integral(profile, order)?.value())
}

pub fn total_volume(profile: &dyn CoefficientProfile) -> Result<f64> {
    total_volume_with(profile, DEFAULT_PANEL_ORDER)
}

/// `∫₁^∞ √B dμ/μ`.
pub fn gamma_length_mu_form(profile: &dyn CoefficientProfile, order: usize) -> Result<f64> {
    Ok(integrate_mu(|mu| profile.b(lambda_of_mu(mu)).max(0.0).sqrt() / mu, order)?.value())
}

/// Squared speed `A₁ + λ²A₂` of the radial curve.
pub fn radial_speed_squared(profile: &dyn CoefficientProfile, lambda: f64) -> Result<f64> {
    if lambda > LENGTH_FORM_SWITCH {
        let cap = big_lambda(lambda);
        return Ok(4.0 * profile.b(lambda) / (cap * cap));
    }
    let c = coefficients_from_a(profile, lambda)?;
    Ok(c.a1 + lambda * lambda * c.a2)
}

/// `∫₀^∞ √(A₁+λ²A₂) dλ`, with `v = 1/λ` beyond `λ = 1`.
pub fn gamma_length_lambda_form(profile: &dyn CoefficientProfile, order: usize) -> Result<f64> {
    let speed = |l: f64| radial_speed_squared(profile, l).map(|s| s.max(0.0).sqrt());
    let mut acc = CompensatedSum::new();
    for (l, w) in gauss_legendre_on(order, 0.0, 1.0) {
        acc.add(w * speed(l)?);
    }
    let mut last = 0.0;
    for pair in tail_breaks().windows(2) {
        let mut panel = CompensatedSum::new();
        // The doubled tail breakpoints cover v ∈ (0, 1].
        for (v, w) in gauss_legendre_on(order, pair[1] * 2.0, pair[0] * 2.0) {
            panel.add(w * speed(1.0 / v)? / (v * v));
        }
        last = panel.value();
        acc.add(last);
    }
    let total = acc.value();
    if !total.is_finite() || last.abs() > TAIL_TOLERANCE * total.abs() {
        return Err(GeomError::Divergent {
            tail: last.abs(),
            tolerance: TAIL_TOLERANCE * total.abs(),
        });
    }
    Ok(total)
}

pub fn gamma_length(profile: &dyn CoefficientProfile) -> Result<f64> {
    gamma_length_mu_form(profile, DEFAULT_PANEL_ORDER)
}

/// Sampled diameter of SO(3) under `σ·σ`: the largest rotation angle
/// between random pairs, with angles stratified up to π.
pub fn so3_diameter_sampled(samples: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: f64 = 0.0;
    let samples = samples.max(2);
    for k in 0..samples {
        let base = su2_exp(&Vector3::new(
            rng.gen_range(-PI..PI),
            rng.gen_range(-PI..PI),
            rng.gen_range(-PI..PI),
        ));
        let axis = Vector3::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
        let axis = if axis.norm() > 1e-6 { axis.normalize() } else { Vector3::z() };
        let angle = PI * k as f64 / (samples - 1) as f64;
        let other = base * su2_exp(&(axis * angle));
        best = best.max(rotation_distance(&base, &other));
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiameterBound {
    pub gamma_length: f64,
    /// `√A₃(0)` times the sampled SO(3) diameter.
    pub so3_diameter: f64,
    /// `2·(gamma_length + so3_diameter)`.
    pub bound: f64,
}

pub const DIAMETER_SAMPLES: usize = 257;
pub const DIAMETER_SEED: u64 = 0x5eed;

pub fn diameter_upper_bound(profile: &dyn CoefficientProfile) -> Result<DiameterBound> {
    let gamma = gamma_length(profile)?;
    let a3 = coefficients_from_a(profile, 0.0)?.a3;
    let so3 = a3.sqrt() * so3_diameter_sampled(DIAMETER_SAMPLES, DIAMETER_SEED);
    Ok(DiameterBound {
        gamma_length: gamma,
        so3_diameter: so3,
        bound: 2.0 * (gamma + so3),
    })
}

/// `π log λ/(2λ⁴)`, the large-`λ` form of `B`.
pub fn fibre_asymptote(lambda: f64) -> f64 {
    PI * lambda.ln() / (2.0 * lambda.powi(4))
}

/// Columns: `lambda`, `b`, `asymptote`, `ratio`, and the squared norms of
/// `θ₁` and `λ∂/∂λ₂` (the other nonzero images of the isotropy generators)
/// divided by their values at `λ = 1`, with their minimum.
pub fn fibre_collapse_diagnostic(profile: &dyn CoefficientProfile, grid: &[f64]) -> Result<Table> {
    let at_one = coefficients_from_a(profile, 1.0)?;
    let mut table = Table::new(&["lambda", "b", "asymptote", "ratio", "theta1_rel", "rotation_rel", "other_min"])
        .meta("profile", profile.name())
        .meta("normalization", "theta1 and rotation norms divided by their values at lambda = 1");
    for &l in grid {
        if !(l > 0.0) {
            return Err(GeomError::InvalidInput(format!("λ must be > 0, got {l}")));
        }
        let c = coefficients_from_a(profile, l)?;
        let b = profile.b(l);
        let asym = fibre_asymptote(l);
        let theta1 = c.a3 / at_one.a3;
        let rotation = l * l * c.a1 / at_one.a1;
        table.push(vec![l, b, asym, b / asym, theta1, rotation, theta1.min(rotation)]);
    }
    Ok(table)
}

#[derive(Debug, Clone, Serialize)]
pub struct GlobalReport {
    pub profile: String,
    pub so3_volume: f64,
    pub radial_integral: f64,
    pub total_volume: f64,
    pub gamma_length: f64,
    pub diameter: DiameterBound,
    pub volume_refinement: RefinementSequence,
    pub length_refinement: RefinementSequence,
    pub fibre_table: Table,
}

pub const FIBRE_GRID: [f64; 6] = [1.0, 10.0, 1e2, 1e3, 1e4, 1e5];

pub fn global_report(profile: &dyn CoefficientProfile) -> Result<GlobalReport> {
    let volume_refinement = RefinementSequence::from_fn(&REFINEMENT_ORDERS, |n| total_volume_with(profile, n))?;
    let length_refinement = RefinementSequence::from_fn(&REFINEMENT_ORDERS, |n| gamma_length_mu_form(profile, n))?;
    let radial = radial_volume_integral(profile, DEFAULT_PANEL_ORDER)?.value();
    Ok(GlobalReport {
        profile: profile.name(),
        so3_volume: so3_volume(),
        radial_integral: radial,
        total_volume: total_volume(profile)?,
        gamma_length: gamma_length(profile)?,
        diameter: diameter_upper_bound(profile)?,
        volume_refinement,
        length_refinement,
        fibre_table: fibre_collapse_diagnostic(profile, &FIBRE_GRID)?,
    })
}
