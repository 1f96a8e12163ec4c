//! Maps fixed by the antipodal involution, i.e. harmonic maps RP² → RP²,
//! and the finite-length curve `W_ρ` that leaves every compact set.

use std::f64::consts::PI;

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::l2::{energy_density, frame_tangents_at_radial, gram_matrix, l2_inner};
use crate::quadrature::{gauss_legendre_on, SphereQuadrature};
use crate::rational_maps::{
    antipodal_involution, check_rp2_equivariance, polar_decompose, poly, projective_line_distance, sphere_grid, RationalMap,
};
use crate::refine::RefinementSequence;
use crate::table::Table;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A pole closer than this (relative) to the antipode of another pole is a
/// collision.
pub const COLLISION_TOL: f64 = 1e-12;

/// Parameters of a fixed map of odd degree: its poles and the phase of the
/// leading factor. The zeros are the antipodes `−1/w̄ᵢ` and `|μ| = |∏wᵢ|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedSetChart {
    pub degree: usize,
    pub poles: Vec<Complex64>,
    /// `arg μ`.
    pub phase: f64,
}

impl FixedSetChart {
    pub fn new(poles: Vec<Complex64>, phase: f64) -> Self {
        Self {
            degree: poles.len(),
            poles,
            phase: phase.rem_euclid(2.0 * PI),
        }
    }

    pub fn zeros(&self) -> Vec<Complex64> {
        self.poles.iter().map(|w| -ONE / w.conj()).collect()
    }

    /// `2n` real pole coordinates followed by the phase.
    pub fn parameters(&self) -> Vec<f64> {
        let mut p: Vec<f64> = self.poles.iter().flat_map(|w| [w.re, w.im]).collect();
        p.push(self.phase);
        p
    }

    pub fn from_parameters(degree: usize, p: &[f64]) -> Self {
        let poles = (0..degree).map(|i| Complex64::new(p[2 * i], p[2 * i + 1])).collect();
        Self {
            degree,
            poles,
            phase: p[2 * degree],
        }
    }

    fn validate(&self) -> Result<()> {
        if self.degree.is_multiple_of(2) {
            return Err(GeomError::NoFixedPoints(self.degree));
        }
        if self.poles.len() != self.degree {
            return Err(GeomError::InvalidInput(format!(
                "degree {} needs {} poles, got {}",
                self.degree,
                self.degree,
                self.poles.len()
            )));
        }
        if self.poles.iter().any(|w| !(w.norm() > 0.0) || !w.norm().is_finite()) {
            return Err(GeomError::InvalidInput("poles must be finite and nonzero".into()));
        }
        for (i, wi) in self.poles.iter().enumerate() {
            for (j, wj) in self.poles.iter().enumerate() {
                let antipode = -ONE / wj.conj();
                if (wi - antipode).norm() <= COLLISION_TOL * wi.norm().max(antipode.norm()) {
                    return Err(GeomError::Degenerate(format!("pole {i} meets the zero antipodal to pole {j}")));
                }
            }
        }
        Ok(())
    }
}

fn coefficients_of(chart: &FixedSetChart) -> Vec<Complex64> {
    let modulus: f64 = chart.poles.iter().map(|w| w.norm()).product();
    let mu = Complex64::from_polar(modulus, chart.phase);
    let mut coeffs: Vec<Complex64> = poly::from_roots(&chart.zeros()).into_iter().map(|c| c * mu).collect();
    coeffs.extend(poly::from_roots(&chart.poles));
    coeffs
}

/// `W(z) = μ∏(z − zᵢ)/∏(z − wᵢ)` with `zᵢ = −1/w̄ᵢ`, `|μ| = |∏wᵢ|`.
pub fn build_fixed_map(chart: &FixedSetChart) -> Result<RationalMap> {
    chart.validate()?;
    RationalMap::new(chart.degree, coefficients_of(chart))
}

/// Coefficient variations of the fixed map along each of the `2n+1` chart
/// parameters, by central differences of step `h`.
pub fn fixed_set_tangents(chart: &FixedSetChart, h: f64) -> Result<(RationalMap, Vec<Vec<Complex64>>)> {
    let map = build_fixed_map(chart)?;
    let p = chart.parameters();
    let tangents = (0..p.len())
        .map(|k| {
            let mut plus = p.clone();
            let mut minus = p.clone();
            plus[k] += h;
            minus[k] -= h;
            let a = coefficients_of(&FixedSetChart::from_parameters(chart.degree, &plus));
            let b = coefficients_of(&FixedSetChart::from_parameters(chart.degree, &minus));
            a.iter().zip(&b).map(|(x, y)| (x - y) / (2.0 * h)).collect()
        })
        .collect();
    Ok((map, tangents))
}

/// Largest `|Im h(X, Y)|` over pairs of fixed-set tangents, relative to the
/// largest `Re h(X, X)`. The imaginary part of `h` is the Kähler form.
pub fn lagrangian_residual(chart: &FixedSetChart, quad: &SphereQuadrature) -> Result<f64> {
    let (map, tangents) = fixed_set_tangents(chart, 1e-6)?;
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for (i, x) in tangents.iter().enumerate() {
        scale = scale.max(l2_inner(&map, x, x, quad).re);
        for y in &tangents[i + 1..] {
            worst = worst.max(l2_inner(&map, x, y, quad).im.abs());
        }
    }
    Ok(worst / scale)
}

/// Numerical rank of the real Gram matrix of the fixed-set tangents, with
/// eigenvalues below `rel_tol` times the largest treated as zero.
pub fn fixed_set_rank(chart: &FixedSetChart, quad: &SphereQuadrature, rel_tol: f64) -> Result<usize> {
    let (map, tangents) = fixed_set_tangents(chart, 1e-6)?;
    let g = gram_matrix(&map, &tangents, quad);
    let eig = g.symmetric_eigenvalues();
    let max = eig.iter().cloned().fold(0.0, f64::max);
    Ok(eig.iter().filter(|&&e| e > rel_tol * max).count())
}

fn check_curve_args(n: usize, rho: f64) -> Result<()> {
    if n.is_multiple_of(2) {
        return Err(GeomError::NoFixedPoints(n));
    }
    if n < 3 {
        return Err(GeomError::InvalidInput(format!("the curve needs odd degree ≥ 3, got {n}")));
    }
    if !(0.5..1.0).contains(&rho) {
        return Err(GeomError::InvalidInput(format!("ρ must lie in [1/2, 1), got {rho}")));
    }
    Ok(())
}

/// `W_ρ(z) = ρ z^{n−2}(z+1)(z−1/ρ)/((z−1)(z+ρ))`, written with numerator
/// `z^{n−2}(z+1)(ρz−1)`.
pub fn w_rho(n: usize, rho: f64) -> Result<RationalMap> {
    check_curve_args(n, rho)?;
    let c = |x: f64| Complex64::new(x, 0.0);
    let mut num = vec![ZERO; n - 2];
    num.extend([c(-1.0), c(rho - 1.0), c(rho)]);
    let den = vec![c(-rho), c(rho - 1.0), ONE];
    RationalMap::from_num_den(&num, &den)
}

/// `∂/∂ρ` of the coefficients of [`w_rho`].
pub fn w_rho_tangent(n: usize, rho: f64) -> Result<Vec<Complex64>> {
    check_curve_args(n, rho)?;
    let mut t = vec![ZERO; 2 * n + 2];
    t[n - 1] = ONE;
    t[n] = ONE;
    t[n + 1] = -ONE;
    t[n + 2] = ONE;
    Ok(t)
}

/// The unitary Möbius map `u ↦ (u − ρ)/(ρu + 1)`, sending 0 to the pole
/// `−ρ` and ∞ to the antipodal zero `1/ρ`.
fn lump_rotation(rho: f64) -> Matrix2<Complex64> {
    let s = 1.0 / (1.0 + rho * rho).sqrt();
    let c = |x: f64| Complex64::new(x * s, 0.0);
    Matrix2::new(c(1.0), c(-rho), c(rho), c(1.0))
}

/// Width of the lump `W_ρ` carries at its pole `−ρ`, about `ρ^{n−2}(1−ρ)`.
pub fn lump_scale(n: usize, rho: f64) -> f64 {
    rho.powi(n as i32 - 2) * (1.0 - rho)
}

/// Radial panels graded geometrically (ratio 2) towards both chart centres,
/// down to `10⁻⁴` of the lump width.
pub fn curve_quadrature(n: usize, rho: f64, radial_order: usize, angular_order: usize) -> SphereQuadrature {
    let r_min = (1e-4 * lump_scale(n, rho)).clamp(1e-14, 1e-2);
    SphereQuadrature::graded(radial_order, angular_order, r_min, 2.0)
}

pub const CURVE_RADIAL_ORDER: usize = 12;

/// The factor `z^{n−2}` sharpens the map across `|z| = 1` as `n` grows, so
/// the angular order grows with it.
pub fn curve_angular_order(n: usize) -> usize {
    64.max(24 * n)
}

/// `f(ρ)` on a given node set, without a convergence check. The map is
/// first rotated so that its lump (the pole `−ρ` and the zero `1/ρ`, which
/// tend to `∓1`) sits at the chart centres.
pub fn f_rho_at(n: usize, rho: f64, quad: &SphereQuadrature) -> Result<f64> {
    let r = lump_rotation(rho);
    let map = w_rho(n, rho)?;
    let t = map.precompose_tangent(&w_rho_tangent(n, rho)?, &r)?;
    let rotated = map.precompose_moebius(&r)?;
    Ok(l2_inner(&rotated, &t, &t, quad).re)
}

/// `f(ρ) = ‖∂W_ρ/∂ρ‖²`, confirmed against the refined node set.
pub fn f_rho(n: usize, rho: f64, tol: f64) -> Result<f64> {
    let quad = curve_quadrature(n, rho, CURVE_RADIAL_ORDER, curve_angular_order(n));
    let coarse = f_rho_at(n, rho, &quad)?;
    let fine = f_rho_at(n, rho, &quad.refined())?;
    let diff = (fine - coarse).abs();
    if !(diff <= tol * fine.abs()) {
        return Err(GeomError::Accuracy {
            difference: diff,
            tolerance: tol,
            hint: format!("f(ρ) at ρ = {rho}: increase the radial grading near z = ±1"),
        });
    }
    Ok(fine)
}

/// `f(ρ)/(1 + log(1/(1−ρ)))`.
pub fn log_bound_ratio(n: usize, rho: f64, tol: f64) -> Result<f64> {
    Ok(f_rho(n, rho, tol)? / (1.0 + (1.0 / (1.0 - rho)).ln()))
}

/// Largest allowed `max/min` of the log ratios over the sampled `ρ`.
pub const LOG_RATIO_SPREAD: f64 = 1.25;

#[derive(Debug, Clone, Serialize)]
pub struct LogRatioCheck {
    pub ks: Vec<u32>,
    pub ratios: Vec<f64>,
    /// `df/ds` between the last two samples, `s = log(1/(1−ρ))`; the ratio
    /// tends to this if `f` grows linearly in `s`.
    pub slope: f64,
    pub bounded: bool,
}

/// `f(ρ)/(1 + log(1/(1−ρ)))` at `ρ = 1 − 10^{−k}`, flagged bounded when the
/// spread stays within [`LOG_RATIO_SPREAD`].
pub fn log_ratio_check(n: usize, ks: &[u32], tol: f64) -> Result<LogRatioCheck> {
    if ks.len() < 2 {
        return Err(GeomError::InvalidInput("need at least two k values".into()));
    }
    let fs = ks
        .iter()
        .map(|&k| f_rho(n, 1.0 - 10f64.powi(-(k as i32)), tol))
        .collect::<Result<Vec<_>>>()?;
    let ratios: Vec<f64> = ks.iter().zip(&fs).map(|(&k, f)| f / (1.0 + k as f64 * 10f64.ln())).collect();
    let m = fs.len();
    let slope = (fs[m - 1] - fs[m - 2]) / ((ks[m - 1] - ks[m - 2]) as f64 * 10f64.ln());
    let max = ratios.iter().cloned().fold(f64::MIN, f64::max);
    let min = ratios.iter().cloned().fold(f64::MAX, f64::min);
    Ok(LogRatioCheck {
        ks: ks.to_vec(),
        ratios,
        slope,
        bounded: min > 0.0 && max <= LOG_RATIO_SPREAD * min,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct IncompletenessReport {
    pub degree: usize,
    /// Partial lengths `∫_{1/2}^{1−10^{−k}} √f dρ`, indexed by `k`.
    pub partial: RefinementSequence,
    pub extrapolated: f64,
    /// False when the partial lengths do not form a Cauchy sequence.
    pub converged: bool,
    /// `max f/(1 + log(1/(1−ρ)))` over all sample points.
    pub fitted_constant: f64,
    /// `√C ∫_{1/2}^1 √(1 + log(1/(1−ρ))) dρ`.
    pub log_bound: f64,
    /// `(ρ, f(ρ))` at every node used.
    pub samples: Vec<(f64, f64)>,
}

impl IncompletenessReport {
    pub fn samples_table(&self) -> Table {
        let mut t = Table::new(&["rho", "f", "log_ratio"])
            .meta("degree", self.degree)
            .meta("fitted_constant", self.fitted_constant);
        for &(rho, f) in &self.samples {
            t.push(vec![rho, f, f / (1.0 - (1.0 - rho).ln())]);
        }
        t
    }
}

/// Gauss nodes per unit of `s = −log(1−ρ)`.
pub const LENGTH_PANEL_ORDER: usize = 8;

/// `∫ √(1+s) e^{−s} ds` over `s ≥ log 2`.
fn log_bound_integral() -> f64 {
    let breaks: Vec<f64> = std::iter::once(2f64.ln()).chain((1..=80).map(|k| k as f64)).collect();
    crate::quadrature::integrate_panels(|s| (1.0 + s).sqrt() * (-s).exp(), &breaks, 16)
}

/// Partial lengths of the curve `W_ρ` from `ρ = 1/2` to `ρ = 1 − 10^{−k}`
/// for each `k`, integrated in `s = −log(1−ρ)` where `dρ = e^{−s} ds`.
pub fn incompleteness_length(n: usize, ks: &[u32]) -> Result<IncompletenessReport> {
    check_curve_args(n, 0.5)?;
    if ks.is_empty() || ks.windows(2).any(|w| w[1] <= w[0]) || ks[0] == 0 {
        return Err(GeomError::InvalidInput("k values must be positive and increasing".into()));
    }
    let mut samples = Vec::new();
    let mut partials = Vec::new();
    let mut acc = crate::sum::CompensatedSum::new();
    let mut start = 2f64.ln();
    for &k in ks {
        let end = k as f64 * 10f64.ln();
        let panels = (end - start).ceil().max(1.0) as usize;
        let width = (end - start) / panels as f64;
        for p in 0..panels {
            let a = start + p as f64 * width;
            for (s, w) in gauss_legendre_on(LENGTH_PANEL_ORDER, a, a + width) {
                let rho = 1.0 - (-s).exp();
                let quad = curve_quadrature(n, rho, CURVE_RADIAL_ORDER, curve_angular_order(n));
                let f = f_rho_at(n, rho, &quad)?;
                samples.push((rho, f));
                acc.add(w * f.max(0.0).sqrt() * (-s).exp());
            }
        }
        partials.push(acc.value());
        start = end;
    }
    let partial = RefinementSequence::new(ks.iter().map(|&k| k as usize).collect(), partials);
    let fitted_constant = samples.iter().map(|&(rho, f)| f / (1.0 - (1.0 - rho).ln())).fold(0.0, f64::max);
    Ok(IncompletenessReport {
        degree: n,
        extrapolated: partial.extrapolated(),
        converged: partial.is_cauchy(),
        partial,
        fitted_constant,
        log_bound: fitted_constant.sqrt() * log_bound_integral(),
        samples,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UnitaryFixedReport {
    pub samples: usize,
    /// Largest projective distance between a sample and its image under the
    /// involution.
    pub fixed_residual: f64,
    /// Largest `‖MM†/(½tr MM†) − 𝕀‖`.
    pub unitarity_residual: f64,
    /// Largest `|Gram(θ_a, θ_b) − A₃(0)δ_ab|` at the identity, by quadrature.
    pub gram_residual: f64,
    /// Largest variance of the energy density over a sphere grid.
    pub density_variance: f64,
}

impl UnitaryFixedReport {
    pub fn passed(&self, tol: f64, gram_tol: f64) -> bool {
        self.fixed_residual < tol && self.unitarity_residual < tol && self.gram_residual < gram_tol && self.density_variance < tol
    }
}

/// The involution on degree-one matrices, `[a b; c d] ↦ [−d̄ c̄; b̄ −ā]`.
fn involution_matrix(m: &Matrix2<Complex64>) -> Matrix2<Complex64> {
    Matrix2::new(-m[(1, 1)].conj(), m[(1, 0)].conj(), m[(0, 1)].conj(), -m[(0, 0)].conj())
}

/// Degree-one fixed maps from random matrices: the involution is
/// antilinear with square one, so `e^{iα}M + 𝖯(e^{iα}M)` is fixed.
pub fn random_fixed_matrices(samples: usize, seed: u64) -> Vec<Matrix2<Complex64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(samples);
    while out.len() < samples {
        let mut c = || Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let m = Matrix2::new(c(), c(), c(), c());
        let phase = Complex64::from_polar(1.0, rng.gen_range(0.0..2.0 * PI));
        let m = m * phase;
        let fixed = m + involution_matrix(&m);
        if fixed.determinant().norm() > 1e-3 * fixed.norm_squared() {
            out.push(fixed);
        }
    }
    out
}

/// Checks that fixed degree-one maps are projectively unitary, that the
/// metric restricted to them is `A₃(0)σ·σ`, and that their energy density
/// is uniform.
pub fn n1_fixed_is_unitary(samples: usize, seed: u64, quad: &SphereQuadrature) -> Result<UnitaryFixedReport> {
    let grid = sphere_grid(100);
    let mut report = UnitaryFixedReport {
        samples,
        fixed_residual: 0.0,
        unitarity_residual: 0.0,
        gram_residual: 0.0,
        density_variance: 0.0,
    };
    for m in random_fixed_matrices(samples, seed) {
        let map = RationalMap::from_matrix(&m)?;
        let image = antipodal_involution(&map);
        report.fixed_residual = report
            .fixed_residual
            .max(projective_line_distance(map.coefficients(), image.coefficients()));
        report.fixed_residual = report.fixed_residual.max(check_rp2_equivariance(&map, &grid));
        let mm = m * m.adjoint();
        let scale = Complex64::new(0.5 * mm.trace().re, 0.0);
        report.unitarity_residual = report.unitarity_residual.max((mm / scale - Matrix2::identity()).norm());
        let polar = polar_decompose(&m)?;
        report.unitarity_residual = report.unitarity_residual.max(polar.lambda_norm());
        let d: Vec<f64> = grid.iter().map(|&z| energy_density(&map, z)).collect();
        let mean = d.iter().sum::<f64>() / d.len() as f64;
        let var = d.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / d.len() as f64;
        report.density_variance = report.density_variance.max(var);
    }
    let frame = frame_tangents_at_radial(0.0)?;
    let g = gram_matrix(&frame.map, &frame.coefficients[3..], quad);
    let expected = DMatrix::<f64>::identity(3, 3) * (PI / 3.0);
    report.gram_residual = (g - expected).abs().max();
    Ok(report)
}

/// Table of `f(ρ)` and its ratio to `1 + log(1/(1−ρ))` at `ρ = 1 − 10^{−k}`.
pub fn f_rho_table(n: usize, ks: &[u32], tol: f64) -> Result<Table> {
    let mut t = Table::new(&["k", "rho", "f", "log_ratio"])
        .meta("degree", n)
        .meta("refinement_tolerance", tol);
    for &k in ks {
        let rho = 1.0 - 10f64.powi(-(k as i32));
        let f = f_rho(n, rho, tol)?;
        t.push(vec![k as f64, rho, f, f / (1.0 + (1.0 / (1.0 - rho)).ln())]);
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_is_fixed() {
        let grid = sphere_grid(200);
        for rho in [0.5, 0.9, 0.999] {
            let m = w_rho(3, rho).unwrap();
            assert!(check_rp2_equivariance(&m, &grid) < 1e-10);
        }
    }

    #[test]
    fn chart_builds_fixed_map() {
        let chart = FixedSetChart::new(
            vec![Complex64::new(2.0, 0.0), Complex64::new(0.0, 3.0), Complex64::new(-1.0, 1.0)],
            PI / 4.0,
        );
        let m = build_fixed_map(&chart).unwrap();
        assert!(check_rp2_equivariance(&m, &sphere_grid(200)) < 1e-10);
    }
}
