//! Curvature of invariant Kähler metrics on degree-one maps as functions of
//! the radial coordinate.
//!
//! Everything is expressed through `L = log(A²B)` and `β = log B`:
//! `Ā = −L'/(2λ)`, `B̄ = −(λL' + Λ²L'')/8`, `Hol(e₃) = −(Λ²β'' + λβ')/(8B)`.
//! These are algebraically identical to the rational expressions in
//! `A, A', A''` but do not cancel catastrophically at large `λ`.

use serde::Serialize;

use crate::error::{GeomError, Result};
use crate::jet::Jet;
use crate::profile::CoefficientProfile;
use crate::table::Table;

/// Above this `λ` the cancellation-free form of `Hol(e₁)` is used.
const HOL_E1_SWITCH: f64 = 1.0;

fn check_b(b: f64, lambda: f64) -> Result<()> {
    if !(b > 0.0) || !b.is_finite() {
        return Err(GeomError::SingularProfile {
            lambda,
            reason: format!("B = {b:e} is not positive"),
        });
    }
    Ok(())
}

fn log_a2b(profile: &dyn CoefficientProfile, lambda: f64) -> Result<(Jet, Jet)> {
    let a = profile.a_jet(lambda);
    let b = profile.b_jet(lambda);
    check_b(b.value(), lambda)?;
    if !(a.value() > 0.0) {
        return Err(GeomError::SingularProfile {
            lambda,
            reason: format!("A = {:e} is not positive", a.value()),
        });
    }
    Ok((a.ln() * 2.0 + b.ln(), b))
}

/// Ricci generator `Ā` as a jet in `λ` (for `λ > 0`).
fn abar_jet(profile: &dyn CoefficientProfile, lambda: f64) -> Result<Jet> {
    let (l, _) = log_a2b(profile, lambda)?;
    Ok(l.derivative() / Jet::variable(lambda) * -0.5)
}

/// `(Ā, B̄)`, the generators of the Ricci tensor.
pub fn ricci_generators(profile: &dyn CoefficientProfile, lambda: f64) -> Result<(f64, f64)> {
    let (l, _) = log_a2b(profile, lambda)?;
    let (d1, d2) = (l.deriv(1), l.deriv(2));
    let abar = if lambda == 0.0 { -0.5 * d2 } else { -0.5 * d1 / lambda };
    let bbar = -(lambda * d1 + (1.0 + lambda * lambda) * d2) / 8.0;
    Ok((abar, bbar))
}

/// `Ā` from the rational expression in `A, A', A''` (for cross-checks; loses
/// precision at large `λ`).
pub fn abar_rational(profile: &dyn CoefficientProfile, lambda: f64) -> f64 {
    let j = profile.a_jet(lambda);
    let (a, da, d2a) = (j.value(), j.deriv(1), j.deriv(2));
    let l = lambda;
    let l2 = l * l;
    let num = 2.0 * l * (1.0 + l2) * da * da + (9.0 * l2 + 4.0) * a * da + l * (1.0 + l2) * a * d2a + 4.0 * a * a * l;
    let den = 2.0 * l * a * (a + 2.0 * l2 * a + l * da + l2 * l * da);
    -num / den
}

/// `B̄ = (1+2λ²)Ā/4 + (λ+λ³)Ā'/4` with `Ā'` from the jet of `Ā` (for
/// cross-checks, `λ > 0`).
pub fn bbar_from_abar(profile: &dyn CoefficientProfile, lambda: f64) -> Result<f64> {
    let j = abar_jet(profile, lambda)?;
    let l2 = lambda * lambda;
    Ok((1.0 + 2.0 * l2) * j.value() / 4.0 + lambda * (1.0 + l2) * j.deriv(1) / 4.0)
}

/// `Ā'` from the exact jet (`λ > 0`).
pub fn abar_derivative(profile: &dyn CoefficientProfile, lambda: f64) -> Result<f64> {
    Ok(abar_jet(profile, lambda)?.deriv(1))
}

/// Holomorphic sectional curvature of the unit vector along `∂/∂λ₃`.
pub fn hol_e3(profile: &dyn CoefficientProfile, lambda: f64) -> Result<f64> {
    let b = profile.b_jet(lambda);
    check_b(b.value(), lambda)?;
    let beta = b.ln();
    let big2 = 1.0 + lambda * lambda;
    Ok(-(big2 * beta.deriv(2) + lambda * beta.deriv(1)) / (8.0 * b.value()))
}

/// `Hol(e₃)` as printed, `((1+λ²)/8B²)·{(B'/B − λ/(1+λ²))B' − B''}`.
pub fn hol_e3_rational(profile: &dyn CoefficientProfile, lambda: f64) -> f64 {
    let b = profile.b_jet(lambda);
    let (b0, b1, b2) = (b.value(), b.deriv(1), b.deriv(2));
    let big2 = 1.0 + lambda * lambda;
    big2 / (8.0 * b0 * b0) * ((b1 / b0 - lambda / big2) * b1 - b2)
}

/// `Hol(e₁)` as a rational expression in `A, A'`; at `λ = 0` the quotient
/// `A'/λ` is replaced by `A''`.
pub fn hol_e1_rational(profile: &dyn CoefficientProfile, lambda: f64) -> Result<f64> {
    let j = profile.a_jet(lambda);
    let (a, da) = (j.value(), j.deriv(1));
    let l = lambda;
    let l2 = l * l;
    let big2 = 1.0 + l2;
    let den = (big2 + l2) * a + l * big2 * da;
    if !(den > 0.0) {
        return Err(GeomError::SingularProfile {
            lambda,
            reason: "(Λ²+λ²)A + λΛ²A' vanishes".into(),
        });
    }
    let slope_over_lambda = if l == 0.0 { j.deriv(2) } else { da / l };
    let first = (l * a + 0.5 * big2 * da) / den * (l * a / big2 + da);
    let brace = first - (2.0 + l2) / big2 * a - (3.0 + 2.0 * l2) / 2.0 * slope_over_lambda;
    Ok(brace / (a * a * big2))
}

/// Holomorphic sectional curvature of the unit vector along `∂/∂λ₁`.
///
/// For `λ > 1` uses `[A² + 4(1+2λ²)AB − 32B²]/(8λ²Λ²A²B)`, obtained by
/// eliminating `A'` in favour of `B`.
pub fn hol_e1(profile: &dyn CoefficientProfile, lambda: f64) -> Result<f64> {
    if lambda <= HOL_E1_SWITCH {
        return hol_e1_rational(profile, lambda);
    }
    let a = profile.a(lambda);
    let b = profile.b(lambda);
    check_b(b, lambda)?;
    let l2 = lambda * lambda;
    let num = a * a + 4.0 * (1.0 + 2.0 * l2) * a * b - 32.0 * b * b;
    Ok(num / (8.0 * l2 * (1.0 + l2) * a * a * b))
}

/// Scalar curvature `κ = 4Ā/A + 2B̄/B`.
pub fn scalar_curvature(profile: &dyn CoefficientProfile, lambda: f64) -> Result<f64> {
    let (abar, bbar) = ricci_generators(profile, lambda)?;
    Ok(4.0 * abar / profile.a(lambda) + 2.0 * bbar / profile.b(lambda))
}

/// `κ = 2[2Ā₁/A + (Ā₁+λ²Ā₂)/(A₁+λ²A₂)]` with `Ā₂ = Ā/Λ² + Ā'/λ`, i.e. the
/// trace over the unitary frame (for cross-checks, `λ > 0`).
pub fn scalar_curvature_frame(profile: &dyn CoefficientProfile, lambda: f64) -> Result<f64> {
    let abar = abar_jet(profile, lambda)?;
    let j = profile.a_jet(lambda);
    let l2 = lambda * lambda;
    let big2 = 1.0 + l2;
    let a1 = j.value();
    let a2 = a1 / big2 + j.deriv(1) / lambda;
    let r1 = abar.value();
    let r2 = r1 / big2 + abar.deriv(1) / lambda;
    Ok(2.0 * (2.0 * r1 / a1 + (r1 + l2 * r2) / (a1 + l2 * a2)))
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct CurvatureRow {
    pub lambda: f64,
    pub a: f64,
    pub b: f64,
    pub hol_e1: f64,
    pub hol_e3: f64,
    pub abar: f64,
    pub bbar: f64,
    pub kappa: f64,
}

impl CurvatureRow {
    pub fn at(profile: &dyn CoefficientProfile, lambda: f64) -> Result<Self> {
        let (abar, bbar) = ricci_generators(profile, lambda)?;
        Ok(Self {
            lambda,
            a: profile.a(lambda),
            b: profile.b(lambda),
            hol_e1: hol_e1(profile, lambda)?,
            hol_e3: hol_e3(profile, lambda)?,
            abar,
            bbar,
            kappa: scalar_curvature(profile, lambda)?,
        })
    }

    /// `λ²Ā`, `(log λ)²B̄`, `(log λ)³κ/λ⁴`, `(log λ)³Hol(e₃)/λ⁴`.
    pub fn asymptotic_ratios(&self) -> [f64; 4] {
        let l = self.lambda;
        let lg = l.ln();
        [
            l * l * self.abar,
            lg * lg * self.bbar,
            lg.powi(3) * self.kappa / l.powi(4),
            lg.powi(3) * self.hol_e3 / l.powi(4),
        ]
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CurvatureReport {
    pub profile: String,
    pub rows: Vec<CurvatureRow>,
}

/// How `Ā'` and the other derivatives are obtained, for report metadata.
pub const DERIVATIVE_METHOD: &str = "exact Taylor-jet differentiation";

impl CurvatureReport {
    pub fn compute(profile: &dyn CoefficientProfile, grid: &[f64]) -> Result<Self> {
        let rows = grid.iter().map(|&l| CurvatureRow::at(profile, l)).collect::<Result<Vec<_>>>()?;
        for r in &rows {
            let vals = [r.a, r.b, r.hol_e1, r.hol_e3, r.abar, r.bbar, r.kappa];
            if vals.iter().any(|v| !v.is_finite()) {
                return Err(GeomError::SingularProfile {
                    lambda: r.lambda,
                    reason: "non-finite curvature value".into(),
                });
            }
        }
        Ok(Self {
            profile: profile.name(),
            rows,
        })
    }

    pub fn to_table(&self) -> Table {
        let mut t = Table::new(&[
            "lambda",
            "A",
            "B",
            "Hol_e1",
            "Hol_e3",
            "Abar",
            "Bbar",
            "kappa",
            "lambda2_Abar",
            "log2_Bbar",
            "log3_kappa_over_lambda4",
            "log3_Hol_e3_over_lambda4",
        ])
        .meta("profile", &self.profile)
        .meta("derivatives", DERIVATIVE_METHOD);
        for r in &self.rows {
            let d = r.asymptotic_ratios();
            t.push(vec![
                r.lambda, r.a, r.b, r.hol_e1, r.hol_e3, r.abar, r.bbar, r.kappa, d[0], d[1], d[2], d[3],
            ]);
        }
        t
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PositivityScan {
    pub points: usize,
    pub min_abar: f64,
    pub min_bbar: f64,
    pub min_kappa: f64,
    /// `(λ, quantity)` for every failing point.
    pub failures: Vec<(f64, String)>,
    /// Always states that a finite scan is evidence, not proof.
    pub label: String,
}

impl PositivityScan {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks `Ā > 0`, `B̄ > 0` (together equivalent to a positive Ricci
/// tensor) and `κ > 0` pointwise.
pub fn positivity_scan(profile: &dyn CoefficientProfile, grid: &[f64]) -> Result<PositivityScan> {
    let mut scan = PositivityScan {
        points: grid.len(),
        min_abar: f64::INFINITY,
        min_bbar: f64::INFINITY,
        min_kappa: f64::INFINITY,
        failures: Vec::new(),
        label: "numerical support for positive Ricci and scalar curvature on the grid; not a proof".into(),
    };
    for &l in grid {
        let (abar, bbar) = ricci_generators(profile, l)?;
        let kappa = scalar_curvature(profile, l)?;
        scan.min_abar = scan.min_abar.min(abar);
        scan.min_bbar = scan.min_bbar.min(bbar);
        scan.min_kappa = scan.min_kappa.min(kappa);
        for (v, name) in [(abar, "Abar"), (bbar, "Bbar"), (kappa, "kappa")] {
            if !(v > 0.0) {
                scan.failures.push((l, name.into()));
            }
        }
    }
    Ok(scan)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::{FubiniStudyProfile, L2Profile};

    #[test]
    fn fubini_study_is_einstein_with_constant_curvature() {
        for &l in &[0.0, 0.5, 1.0, 2.0, 10.0] {
            let fs = FubiniStudyProfile;
            assert!((hol_e1(&fs, l).unwrap() - 4.0).abs() < 1e-9, "λ={l}");
            assert!((hol_e3(&fs, l).unwrap() - 4.0).abs() < 1e-9, "λ={l}");
            assert!((scalar_curvature(&fs, l).unwrap() - 48.0).abs() < 1e-8, "λ={l}");
            let (abar, _) = ricci_generators(&fs, l).unwrap();
            assert!((abar - 8.0 * fs.a(l)).abs() < 1e-9);
        }
    }

    #[test]
    fn stable_and_rational_forms_agree_at_moderate_lambda() {
        for &l in &[0.3, 0.8, 1.5, 3.0] {
            let p = L2Profile;
            let (abar, bbar) = ricci_generators(&p, l).unwrap();
            assert!((abar - abar_rational(&p, l)).abs() < 1e-11 * abar.abs().max(1.0));
            assert!((bbar - bbar_from_abar(&p, l).unwrap()).abs() < 1e-11);
            assert!((hol_e3(&p, l).unwrap() - hol_e3_rational(&p, l)).abs() < 1e-10);
            assert!((hol_e1(&p, l).unwrap() - hol_e1_rational(&p, l).unwrap()).abs() < 1e-10);
            let k = scalar_curvature(&p, l).unwrap();
            assert!((k - scalar_curvature_frame(&p, l).unwrap()).abs() < 1e-10 * k.abs().max(1.0));
        }
    }

    #[test]
    fn report_table_has_all_columns() {
        let r = CurvatureReport::compute(&L2Profile, &[0.5, 1.0]).unwrap();
        let t = r.to_table();
        assert_eq!(t.columns.len(), 12);
        assert_eq!(t.rows.len(), 2);
    }
}
