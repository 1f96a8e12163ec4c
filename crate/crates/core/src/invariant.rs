//! Invariant Kähler metrics on degree-one maps, assembled at the radial
//! maps `z ↦ μz` in the basis `(∂/∂λ₁, ∂/∂λ₂, ∂/∂λ₃, θ₁, θ₂, θ₃)`.

use std::f64::consts::PI;

use nalgebra::SMatrix;
use serde::Serialize;

use crate::error::{GeomError, Result};
use crate::profile::{big_lambda, CoefficientProfile};
use crate::quadrature::gauss_legendre_on;

pub type Mat6 = SMatrix<f64, 6, 6>;

/// Tolerance on `|A'(0)|` (relative to `A(0)`) for a profile to count as
/// smooth at the origin.
pub const ORIGIN_SLOPE_TOL: f64 = 1e-8;

/// The five coefficient functions of the invariant metric
/// `A₁ dλ·dλ + A₂(λ·dλ)² + A₃ σ·σ + A₄(λ·σ)² + A₅ λ·(σ×dλ)` at one `λ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricCoefficients {
    pub lambda: f64,
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub a4: f64,
    pub a5: f64,
}

impl MetricCoefficients {
    /// `‖θ₃‖² = A₃ + λ²A₄`.
    pub fn b(&self) -> f64 {
        self.a3 + self.lambda * self.lambda * self.a4
    }

    /// Max deviation from the two Hermiticity relations
    /// `A₃ = A₁/4 + λ²A₅/2` and `A₁ + λ²A₂ = 4(A₃ + λ²A₄)/(1+λ²)`.
    pub fn hermiticity_residual(&self) -> f64 {
        let l2 = self.lambda * self.lambda;
        let r1 = self.a3 - self.a1 / 4.0 - l2 * self.a5 / 2.0;
        let r2 = self.a1 + l2 * self.a2 - 4.0 * (self.a3 + l2 * self.a4) / (1.0 + l2);
        r1.abs().max(r2.abs())
    }
}

/// `A₁ = A₅ = A`, `A₂ = A/(1+λ²) + A'/λ`, `A₃ = (1+2λ²)A/4`,
/// `A₄ = (1+λ²)A'/(4λ)`; at `λ = 0` the quotients take their limits.
pub fn coefficients_from_a(profile: &dyn CoefficientProfile, lambda: f64) -> Result<MetricCoefficients> {
    if !(lambda >= 0.0) {
        return Err(GeomError::InvalidInput(format!("λ must be ≥ 0, got {lambda}")));
    }
    let j = profile.a_jet(lambda);
    let (a, da) = (j.value(), j.deriv(1));
    let l2 = lambda * lambda;
    let slope_over_lambda = if lambda == 0.0 {
        if da.abs() > ORIGIN_SLOPE_TOL * a.abs().max(1.0) {
            return Err(GeomError::SingularProfile {
                lambda,
                reason: format!("A'(0) = {da:e} ≠ 0"),
            });
        }
        j.deriv(2)
    } else {
        da / lambda
    };
    Ok(MetricCoefficients {
        lambda,
        a1: a,
        a2: a / (1.0 + l2) + slope_over_lambda,
        a3: (1.0 + 2.0 * l2) * a / 4.0,
        a4: (1.0 + l2) * slope_over_lambda / 4.0,
        a5: a,
    })
}

/// Gram matrix of the invariant metric with the given coefficients at
/// `𝛌 = (0, 0, λ)`.
pub fn gram_from_coefficients(c: &MetricCoefficients) -> Mat6 {
    let l = c.lambda;
    let mut g = Mat6::zeros();
    for i in 0..3 {
        g[(i, i)] = c.a1;
        g[(3 + i, 3 + i)] = c.a3;
    }
    g[(2, 2)] += l * l * c.a2;
    g[(5, 5)] += l * l * c.a4;
    // λ·(σ×dλ) = λ(σ₁dλ₂ − σ₂dλ₁), symmetrized.
    let cross = 0.5 * l * c.a5;
    g[(3, 1)] = cross;
    g[(1, 3)] = cross;
    g[(4, 0)] = -cross;
    g[(0, 4)] = -cross;
    g
}

/// The complex structure inherited from the coefficient chart, as the
/// matrix whose columns are the images of the basis vectors.
pub fn complex_structure(lambda: f64) -> Mat6 {
    let big = big_lambda(lambda);
    let mut j = Mat6::zeros();
    // J∂₁ = (2/Λ)θ₁ − (λ/Λ)∂₂
    j[(3, 0)] = 2.0 / big;
    j[(1, 0)] = -lambda / big;
    // J∂₂ = (2/Λ)θ₂ + (λ/Λ)∂₁
    j[(4, 1)] = 2.0 / big;
    j[(0, 1)] = lambda / big;
    // J∂₃ = (2/Λ)θ₃
    j[(5, 2)] = 2.0 / big;
    // Jθ₁ = −(1/2Λ)∂₁ + (λ/Λ)θ₂
    j[(0, 3)] = -0.5 / big;
    j[(4, 3)] = lambda / big;
    // Jθ₂ = −(1/2Λ)∂₂ − (λ/Λ)θ₁
    j[(1, 4)] = -0.5 / big;
    j[(3, 4)] = -lambda / big;
    // Jθ₃ = −(Λ/2)∂₃
    j[(2, 5)] = -0.5 * big;
    j
}

/// Kähler-form coefficients read off from `Ω = Gram(J·, ·)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KaehlerCoefficients {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub a4: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct FrameGeometry {
    pub lambda: f64,
    pub coefficients: MetricCoefficients,
    pub gram: Mat6,
    pub j: Mat6,
    /// `Ω[i][j] = Gram(J eᵢ, eⱼ)`.
    pub omega: Mat6,
    /// Read off from `Ω`; `None` at `λ = 0` where the quotients are undefined.
    pub kaehler: Option<KaehlerCoefficients>,
}

impl FrameGeometry {
    pub fn from_coefficients(c: MetricCoefficients) -> Result<Self> {
        let lambda = c.lambda;
        let gram = gram_from_coefficients(&c);
        if gram.cholesky().is_none() {
            return Err(GeomError::SingularProfile {
                lambda,
                reason: "Gram matrix is not positive definite".into(),
            });
        }
        let j = complex_structure(lambda);
        let omega = j.transpose() * gram;
        let kaehler = (lambda > 0.0).then(|| {
            let a1 = omega[(0, 3)];
            KaehlerCoefficients {
                a1,
                a2: (omega[(2, 5)] - a1) / (lambda * lambda),
                a3: omega[(3, 4)] / lambda,
                a4: omega[(0, 1)] / lambda,
            }
        });
        Ok(Self {
            lambda,
            coefficients: c,
            gram,
            j,
            omega,
            kaehler,
        })
    }

    /// `max |J² + 𝕀|`.
    pub fn j_squared_residual(&self) -> f64 {
        (self.j * self.j + Mat6::identity()).abs().max()
    }

    /// `max |Gram(J·, J·) − Gram|`.
    pub fn hermiticity_residual(&self) -> f64 {
        (self.j.transpose() * self.gram * self.j - self.gram).abs().max()
    }

    /// `max |Ω + Ωᵀ|`.
    pub fn antisymmetry_residual(&self) -> f64 {
        (self.omega + self.omega.transpose()).abs().max()
    }
}

pub fn frame_geometry(profile: &dyn CoefficientProfile, lambda: f64) -> Result<FrameGeometry> {
    FrameGeometry::from_coefficients(coefficients_from_a(profile, lambda)?)
}

/// Max over the grid of the Hermiticity residual of the coefficients.
pub fn verify_hermiticity(profile: &dyn CoefficientProfile, grid: &[f64]) -> Result<f64> {
    let mut r: f64 = 0.0;
    for &l in grid {
        r = r.max(coefficients_from_a(profile, l)?.hermiticity_residual());
    }
    Ok(r)
}

/// Residuals of the three closure conditions `Â₁ = Â₃`, `Â₁' = λÂ₂`,
/// `Â₄ = 0`, with `Â₁'` from a five-point central difference.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ClosureResidual {
    pub first_equals_third: f64,
    pub derivative: f64,
    pub fourth_vanishes: f64,
}

impl ClosureResidual {
    pub fn max(&self) -> f64 {
        self.first_equals_third.max(self.derivative).max(self.fourth_vanishes)
    }
}

/// Step of the five-point difference used for `Â₁'`.
pub const CLOSURE_FD_STEP: f64 = 1e-3;

pub fn verify_closure(profile: &dyn CoefficientProfile, grid: &[f64]) -> Result<ClosureResidual> {
    let hat = |l: f64| -> Result<KaehlerCoefficients> {
        frame_geometry(profile, l)?
            .kaehler
            .ok_or_else(|| GeomError::InvalidInput("closure is checked on λ > 0 only".into()))
    };
    let mut out = ClosureResidual {
        first_equals_third: 0.0,
        derivative: 0.0,
        fourth_vanishes: 0.0,
    };
    for &l in grid {
        let k = hat(l)?;
        let h = CLOSURE_FD_STEP.min(l / 4.0);
        let d = (hat(l - 2.0 * h)?.a1 - 8.0 * hat(l - h)?.a1 + 8.0 * hat(l + h)?.a1 - hat(l + 2.0 * h)?.a1) / (12.0 * h);
        out.first_equals_third = out.first_equals_third.max((k.a1 - k.a3).abs());
        out.derivative = out.derivative.max((d - l * k.a2).abs());
        out.fourth_vanishes = out.fourth_vanishes.max(k.a4.abs());
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct PositivityReport {
    pub passed: bool,
    /// First grid point that fails and the condition it fails.
    pub first_failure: Option<(f64, String)>,
}

/// Checks `A > 0`, `A'/A > −(1+2λ²)/(λ+λ³)` and, for `λ > 1`,
/// `A(λ) > √2 A(1)/(λΛ)` on the grid.
pub fn positivity_check(profile: &dyn CoefficientProfile, grid: &[f64]) -> PositivityReport {
    let a_one = profile.a(1.0);
    for &l in grid {
        let j = profile.a_jet(l);
        let (a, da) = (j.value(), j.deriv(1));
        let fail = |why: &str| PositivityReport {
            passed: false,
            first_failure: Some((l, why.to_string())),
        };
        if !(a > 0.0) {
            return fail("A > 0");
        }
        if l > 0.0 && !(da / a > -(1.0 + 2.0 * l * l) / (l + l * l * l)) {
            return fail("A'/A > -(1+2λ²)/(λ+λ³)");
        }
        if l > 1.0 && !(a > 2f64.sqrt() * a_one / (l * big_lambda(l))) {
            return fail("A(λ) > √2 A(1)/(λΛ)");
        }
    }
    PositivityReport {
        passed: true,
        first_failure: None,
    }
}

/// `(7 + 8cosψ + 6cos2ψ)`: the twisted character on the symmetric part.
pub fn character_plus(psi: f64) -> f64 {
    7.0 + 8.0 * psi.cos() + 6.0 * (2.0 * psi).cos()
}

/// `(5 + 8cosψ + 2cos2ψ)`: the twisted character on the antisymmetric part.
pub fn character_minus(psi: f64) -> f64 {
    5.0 + 8.0 * psi.cos() + 2.0 * (2.0 * psi).cos()
}

/// `∫₀^{2π} f dψ/2π`.
pub fn circle_average(f: impl Fn(f64) -> f64) -> f64 {
    gauss_legendre_on(32, 0.0, 2.0 * PI).iter().map(|(x, w)| w * f(*x)).sum::<f64>() / (2.0 * PI)
}

/// `∫₀^{2π} f (1/π) sin²(ψ/2) dψ`, the class-function measure on SO(3).
pub fn rotation_class_average(f: impl Fn(f64) -> f64) -> f64 {
    gauss_legendre_on(32, 0.0, 2.0 * PI)
        .iter()
        .map(|(x, w)| w * f(*x) * (0.5 * x).sin().powi(2))
        .sum::<f64>()
        / PI
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CharacterIntegrals {
    pub so2_plus: f64,
    pub so2_minus: f64,
    pub so3_plus: f64,
    pub so3_minus: f64,
}

impl CharacterIntegrals {
    pub fn as_array(&self) -> [f64; 4] {
        [self.so2_plus, self.so2_minus, self.so3_plus, self.so3_minus]
    }
}

/// Dimensions of the invariant subspaces counted by the character formula.
pub fn character_integrals() -> CharacterIntegrals {
    CharacterIntegrals {
        so2_plus: circle_average(character_plus),
        so2_minus: circle_average(character_minus),
        so3_plus: rotation_class_average(character_plus),
        so3_minus: rotation_class_average(character_minus),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::{FubiniStudyProfile, L2Profile};

    #[test]
    fn theta3_norm_is_b() {
        for &l in &[0.0, 0.3, 1.0, 4.0] {
            let f = frame_geometry(&L2Profile, l).unwrap();
            assert!((f.gram[(5, 5)] - L2Profile.b(l)).abs() < 1e-13);
            assert_eq!(f.gram[(2, 5)], 0.0);
        }
    }

    #[test]
    fn j_is_complex_structure() {
        for &l in &[0.0, 1.0, 5.0] {
            let f = frame_geometry(&FubiniStudyProfile, l).unwrap();
            assert!(f.j_squared_residual() < 1e-13);
            assert!(f.hermiticity_residual() < 1e-13);
            assert!(f.antisymmetry_residual() < 1e-13);
        }
    }

    #[test]
    fn kaehler_coefficients_match_their_formulas() {
        let l: f64 = 1.7;
        let f = frame_geometry(&L2Profile, l).unwrap();
        let c = f.coefficients;
        let k = f.kaehler.unwrap();
        let big = big_lambda(l);
        assert!((k.a1 - big * c.a1 / 2.0).abs() < 1e-13);
        assert!((k.a2 - big * c.a2 / 2.0).abs() < 1e-12);
        assert!((k.a3 - (c.a1 + 4.0 * c.a3) / (4.0 * big)).abs() < 1e-13);
        assert!((k.a4 - l * (c.a5 - c.a1) / big).abs() < 1e-13);
    }

    #[test]
    fn sloped_profile_is_singular_at_origin() {
        let p = crate::profile::FnProfile::new("slope", |l| l.exp());
        assert!(matches!(coefficients_from_a(&p, 0.0), Err(GeomError::SingularProfile { .. })));
    }

    #[test]
    fn trivial_character() {
        assert!((circle_average(|_| 1.0) - 1.0).abs() < 1e-12);
        assert!((rotation_class_average(|_| 1.0) - 1.0).abs() < 1e-12);
    }
}
