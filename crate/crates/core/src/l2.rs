//! L² inner products, metric matrices and energy, straight from the
//! defining integrals over the domain sphere.
//!
//! Tangent vectors at a map are coefficient variations `δa`. The pointwise
//! variation of the map is `δW = (δN·D − N·δD)/D²`, and the pointwise norm is
//! `|δW|²/(1+|W|²)² = |δN·D − N·δD|²/(|N|²+|D|²)²`, which has no poles. The
//! same expression with reversed polynomials covers the chart at infinity.

use nalgebra::{DMatrix, Matrix2, Vector3};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{GeomError, Result};
use crate::quadrature::{Chart, QuadNode, SphereQuadrature};
use crate::rational_maps::{pauli, su2_exp, RationalMap, RESULTANT_TOL};
use crate::sum::{CompensatedSum, ComplexSum};

/// `dz dz̄ = 2 dx dy` in the metric integral. Together with the domain
/// factor `(1+|z|²)^{-2}` this reproduces the closed-form generator `A`.
pub const MEASURE_FACTOR: f64 = 2.0;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

fn eval_poly(coeffs: &[Complex64], x: Complex64, reversed: bool) -> Complex64 {
    if reversed {
        coeffs.iter().fold(ZERO, |acc, &c| acc * x + c)
    } else {
        coeffs.iter().rev().fold(ZERO, |acc, &c| acc * x + c)
    }
}

/// Local data needed for every tangent integrand at one node.
struct NodeFrame {
    num: Complex64,
    den: Complex64,
    /// `1/(|N|²+|D|²)²` times the node weight and measure factor.
    scale: f64,
    reversed: bool,
    x: Complex64,
}

impl NodeFrame {
    fn new(map: &RationalMap, node: &QuadNode) -> Self {
        let reversed = node.chart == Chart::Outer;
        let x = node.point;
        let num = eval_poly(map.numerator(), x, reversed);
        let den = eval_poly(map.denominator(), x, reversed);
        let norm = num.norm_sqr() + den.norm_sqr();
        let conformal = 1.0 / (1.0 + x.norm_sqr()).powi(2);
        Self {
            num,
            den,
            scale: MEASURE_FACTOR * node.weight * conformal / (norm * norm),
            reversed,
            x,
        }
    }

    /// `δN·D − N·δD` for the coefficient variation `t`.
    fn variation(&self, t: &[Complex64]) -> Complex64 {
        let half = t.len() / 2;
        let dn = eval_poly(&t[..half], self.x, self.reversed);
        let dd = eval_poly(&t[half..], self.x, self.reversed);
        dn * self.den - self.num * dd
    }
}

/// Hermitian L² product `h(X, Y) = 2∫dxdy (1+|z|²)^{-2} δ_X W conj(δ_Y W)/(1+|W|²)²`
/// of two coefficient variations; the Riemannian metric is `Re h`.
pub fn l2_inner(map: &RationalMap, x: &[Complex64], y: &[Complex64], quad: &SphereQuadrature) -> Complex64 {
    let mut acc = ComplexSum::default();
    for node in quad.nodes() {
        let f = NodeFrame::new(map, node);
        acc.add(f.variation(x) * f.variation(y).conj() * f.scale);
    }
    acc.value()
}

/// Real Gram matrix `Re h(Xᵢ, Xⱼ)` of a list of coefficient variations.
pub fn gram_matrix(map: &RationalMap, tangents: &[Vec<Complex64>], quad: &SphereQuadrature) -> DMatrix<f64> {
    let k = tangents.len();
    let mut acc = vec![CompensatedSum::new(); k * k];
    let mut vals = vec![ZERO; k];
    for node in quad.nodes() {
        let f = NodeFrame::new(map, node);
        for (v, t) in vals.iter_mut().zip(tangents) {
            *v = f.variation(t);
        }
        for i in 0..k {
            for j in i..k {
                acc[i * k + j].add((vals[i] * vals[j].conj()).re * f.scale);
            }
        }
    }
    DMatrix::from_fn(k, k, |i, j| {
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        acc[a * k + b].value()
    })
}

/// Harmonic-map energy `½∫|dφ|² = 2∫dxdy |N'D − ND'|²/(|N|²+|D|²)²` at one
/// quadrature, without a convergence check.
pub fn energy_at(map: &RationalMap, quad: &SphereQuadrature) -> f64 {
    let mut acc = CompensatedSum::new();
    for node in quad.nodes() {
        let lv = match node.chart {
            Chart::Inner => map.local(node.point),
            Chart::Outer => map.local_reversed(node.point),
        };
        let wr = lv.dnum * lv.den - lv.num * lv.dden;
        let norm = lv.num.norm_sqr() + lv.den.norm_sqr();
        acc.add(node.weight * 2.0 * wr.norm_sqr() / (norm * norm));
    }
    acc.value()
}

/// Energy confirmed by comparing against the refined quadrature. Returns the
/// refined value.
pub fn energy(map: &RationalMap, quad: &SphereQuadrature) -> Result<f64> {
    map.require_valid(RESULTANT_TOL)?;
    let coarse = energy_at(map, quad);
    let fine = energy_at(map, &quad.refined());
    let diff = (fine - coarse).abs();
    if diff > quad.convergence_tol * fine.abs().max(1.0) {
        return Err(GeomError::Accuracy {
            difference: diff,
            tolerance: quad.convergence_tol,
            hint: "increase the quadrature order".into(),
        });
    }
    Ok(fine)
}

/// Energy density relative to the round area form,
/// `|W'|²(1+|z|²)²/(1+|W|²)²`; identically 1 for rotations.
pub fn energy_density(map: &RationalMap, z: Complex64) -> f64 {
    let lv = map.local(z);
    let wr = lv.dnum * lv.den - lv.num * lv.dden;
    let norm = lv.num.norm_sqr() + lv.den.norm_sqr();
    wr.norm_sqr() * (1.0 + z.norm_sqr()).powi(2) / (norm * norm)
}

/// The Hermitian matrix `γ_αβ` in inhomogeneous coordinates
/// `b^α = a_α / a_pivot`.
#[derive(Debug, Clone, Serialize)]
pub struct MetricMatrix {
    pub matrix: DMatrix<Complex64>,
    /// Coefficient index held fixed at 1.
    pub pivot: usize,
    /// Coefficient index of each coordinate, in order.
    pub coordinates: Vec<usize>,
    /// Base map, rescaled so the pivot coefficient is 1.
    pub base: RationalMap,
    pub order: usize,
    pub measure_factor: f64,
}

impl MetricMatrix {
    pub fn dim(&self) -> usize {
        self.coordinates.len()
    }

    /// Real metric on coordinate vectors: `Re Σ γ_αβ ξ^α conj(η^β)`.
    pub fn real_inner(&self, xi: &[Complex64], eta: &[Complex64]) -> f64 {
        let mut s = ZERO;
        for a in 0..self.dim() {
            for b in 0..self.dim() {
                s += self.matrix[(a, b)] * xi[a] * eta[b].conj();
            }
        }
        s.re
    }

    pub fn hermiticity_residual(&self) -> f64 {
        let n = self.dim();
        let mut r: f64 = 0.0;
        for a in 0..n {
            for b in 0..n {
                r = r.max((self.matrix[(b, a)] - self.matrix[(a, b)].conj()).norm());
            }
        }
        r
    }

    /// Smallest eigenvalue of the Hermitian matrix, via its real 2k×2k form.
    pub fn min_eigenvalue(&self) -> f64 {
        let n = self.dim();
        let real = DMatrix::from_fn(2 * n, 2 * n, |i, j| {
            let g = self.matrix[(i % n, j % n)];
            match (i < n, j < n) {
                (true, true) | (false, false) => g.re,
                (true, false) => -g.im,
                (false, true) => g.im,
            }
        });
        real.symmetric_eigenvalues().min()
    }
}

/// `γ_αβ` in the chart where the last coefficient is fixed to 1.
pub fn l2_metric_matrix(map: &RationalMap, quad: &SphereQuadrature) -> Result<MetricMatrix> {
    l2_metric_matrix_in_chart(map, 2 * map.degree() + 1, quad)
}

/// `γ_αβ` in the chart `b^α = a_α / a_pivot`. Each coordinate direction is
/// the unit variation of one coefficient with the pivot held at 1.
pub fn l2_metric_matrix_in_chart(map: &RationalMap, pivot: usize, quad: &SphereQuadrature) -> Result<MetricMatrix> {
    let coeffs = map.coefficients();
    if pivot >= coeffs.len() {
        return Err(GeomError::InvalidInput(format!("pivot index {pivot} out of range")));
    }
    if coeffs[pivot].norm() == 0.0 {
        return Err(GeomError::InvalidInput(
            "pivot coefficient vanishes; rotate the target first".into(),
        ));
    }
    map.require_valid(RESULTANT_TOL)?;
    let p = coeffs[pivot];
    let base = RationalMap::new(map.degree(), coeffs.iter().map(|c| c / p).collect())?;
    let coordinates: Vec<usize> = (0..coeffs.len()).filter(|&i| i != pivot).collect();
    let k = coordinates.len();
    let half = map.degree() + 1;
    let mut acc = vec![ComplexSum::default(); k * k];
    let mut vals = vec![ZERO; k];
    for node in quad.nodes() {
        let f = NodeFrame::new(&base, node);
        let xn = if f.reversed { half - 1 } else { 0 };
        for (v, &idx) in vals.iter_mut().zip(&coordinates) {
            // Unit variation of coefficient `idx`: a monomial in numerator
            // or denominator.
            let power = if idx < half { idx } else { idx - half };
            let e = if f.reversed { xn - power } else { power };
            let mono = f.x.powu(e as u32);
            *v = if idx < half { mono * f.den } else { -f.num * mono };
        }
        for i in 0..k {
            for j in i..k {
                acc[i * k + j].add(vals[i] * vals[j].conj() * f.scale);
            }
        }
    }
    let mut matrix = DMatrix::from_element(k, k, ZERO);
    for i in 0..k {
        matrix[(i, i)] = Complex64::new(acc[i * k + i].value().re, 0.0);
        for j in (i + 1)..k {
            let v = acc[i * k + j].value();
            matrix[(i, j)] = v;
            matrix[(j, i)] = v.conj();
        }
    }
    Ok(MetricMatrix {
        matrix,
        pivot,
        coordinates,
        base,
        order: quad.order(),
        measure_factor: MEASURE_FACTOR,
    })
}

/// Smallest finite-difference step accepted by [`kaehler_symmetry_residual`];
/// below it, quadrature roundoff divided by the step swamps the signal.
pub const MIN_FD_STEP: f64 = 1e-6;

/// Max over indices of `|∂_δ γ_αβ − ∂_α γ_δβ|` and the conjugate-index
/// analogue, with Wirtinger derivatives from central differences of the
/// metric matrix in the chart with the last coefficient fixed.
pub fn kaehler_symmetry_residual(map: &RationalMap, step: f64, quad: &SphereQuadrature) -> Result<f64> {
    if !(step >= MIN_FD_STEP) {
        return Err(GeomError::Accuracy {
            difference: step,
            tolerance: MIN_FD_STEP,
            hint: "finite-difference step below quadrature noise floor".into(),
        });
    }
    let base = l2_metric_matrix(map, quad)?;
    let pivot = base.pivot;
    let k = base.dim();
    let shifted = |coord: usize, delta: Complex64| -> Result<DMatrix<Complex64>> {
        let mut c = base.base.coefficients().to_vec();
        c[base.coordinates[coord]] += delta;
        let m = RationalMap::new(map.degree(), c)?;
        Ok(l2_metric_matrix_in_chart(&m, pivot, quad)?.matrix)
    };
    // holo[δ] = ∂γ/∂b^δ, anti[δ] = ∂γ/∂b̄^δ.
    let mut holo = Vec::with_capacity(k);
    let mut anti = Vec::with_capacity(k);
    let h = Complex64::new(step, 0.0);
    let ih = Complex64::new(0.0, step);
    for d in 0..k {
        let dx = (shifted(d, h)? - shifted(d, -h)?) / Complex64::new(2.0 * step, 0.0);
        let dy = (shifted(d, ih)? - shifted(d, -ih)?) / Complex64::new(2.0 * step, 0.0);
        let i = Complex64::new(0.0, 1.0);
        holo.push((&dx - &dy * i) * Complex64::new(0.5, 0.0));
        anti.push((&dx + &dy * i) * Complex64::new(0.5, 0.0));
    }
    let mut r: f64 = 0.0;
    for a in 0..k {
        for b in 0..k {
            for d in 0..k {
                r = r.max((holo[d][(a, b)] - holo[a][(d, b)]).norm());
                r = r.max((anti[d][(a, b)] - anti[b][(a, d)]).norm());
            }
        }
    }
    Ok(r)
}

/// Degree-one maps along the radial curve: matrix `diag(Λ+λ, Λ−λ)`,
/// i.e. `z ↦ μz`.
pub fn radial_matrix(lambda: f64) -> Matrix2<Complex64> {
    let big = (1.0 + lambda * lambda).sqrt();
    Matrix2::new(Complex64::new(big + lambda, 0.0), ZERO, ZERO, Complex64::new(big - lambda, 0.0))
}

fn matrix_to_coeffs(m: &Matrix2<Complex64>) -> Vec<Complex64> {
    vec![m[(0, 1)], m[(0, 0)], m[(1, 1)], m[(1, 0)]]
}

/// The six frame tangents `(∂/∂λ₁, ∂/∂λ₂, ∂/∂λ₃, θ₁, θ₂, θ₃)` at the radial
/// map with shape parameter `λ`.
#[derive(Debug, Clone)]
pub struct FrameTangents {
    pub lambda: f64,
    pub map: RationalMap,
    /// Coefficient variations (numerator then denominator).
    pub coefficients: Vec<Vec<Complex64>>,
    /// Components in the chart `b = (a₁₂, a₂₁, a₂₂)/a₁₁`.
    pub chart_components: Vec<[Complex64; 3]>,
}

/// Differentiates `λ_a ↦ [Λ𝕀 + 𝛌·τ]` and `t ↦ [exp(itτ_a/2) M_λ]` at
/// `𝛌 = (0, 0, λ)`.
pub fn frame_tangents_at_radial(lambda: f64) -> Result<FrameTangents> {
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(GeomError::InvalidInput(format!("λ must be ≥ 0, got {lambda}")));
    }
    let big = (1.0 + lambda * lambda).sqrt();
    let m = radial_matrix(lambda);
    let id = Matrix2::<Complex64>::identity();
    let i = Complex64::new(0.0, 1.0);
    let mut variations = vec![pauli(0), pauli(1), pauli(2) + id * Complex64::new(lambda / big, 0.0)];
    for a in 0..3 {
        variations.push(pauli(a) * m * (i * 0.5));
    }
    let chart = |dm: &Matrix2<Complex64>| -> [Complex64; 3] {
        let p = m[(0, 0)];
        let dp = dm[(0, 0)];
        let comp = |r: usize, c: usize| (dm[(r, c)] * p - m[(r, c)] * dp) / (p * p);
        [comp(0, 1), comp(1, 0), comp(1, 1)]
    };
    Ok(FrameTangents {
        lambda,
        map: RationalMap::from_matrix(&m)?,
        coefficients: variations.iter().map(matrix_to_coeffs).collect(),
        chart_components: variations.iter().map(chart).collect(),
    })
}

/// Frame tangents moved by the group action, expressed as the variation of
/// `L M R` for the base matrix `M`; the result is the frame at the acted
/// point.
pub fn act_on_tangents(
    frame: &FrameTangents,
    l: &Matrix2<Complex64>,
    r: &Matrix2<Complex64>,
) -> Result<(RationalMap, Vec<Vec<Complex64>>)> {
    let m = frame.map.to_matrix()?;
    let map = RationalMap::from_matrix(&(l * m * r))?;
    let tangents = frame
        .coefficients
        .iter()
        .map(|t| {
            let dm = Matrix2::new(t[1], t[0], t[3], t[2]);
            matrix_to_coeffs(&(l * dm * r))
        })
        .collect();
    Ok((map, tangents))
}

/// The six frame Gram entries `Re h(Xᵢ, Xⱼ)` at the radial map, by quadrature.
pub fn frame_gram_by_quadrature(lambda: f64, quad: &SphereQuadrature) -> Result<DMatrix<f64>> {
    let f = frame_tangents_at_radial(lambda)?;
    Ok(gram_matrix(&f.map, &f.coefficients, quad))
}

/// Random element of SU(2) from three uniform angles in `[-π, π]`.
pub fn su2_from_vector(v: [f64; 3]) -> Matrix2<Complex64> {
    su2_exp(&Vector3::new(v[0], v[1], v[2]))
}
