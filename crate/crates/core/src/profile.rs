//! Generator functions `A(λ)` of invariant metrics on degree-one maps, with
//! exact derivatives, and the companion `B(λ) = ‖θ₃‖²`.
//!
//! The closed forms are written in `x = log μ = 2 asinh λ`, where they read
//! `A = π(sinh 2x − 2x)/sinh³x` and `B = π(x cosh x − sinh x)/sinh³x`; for
//! small `|x|` both switch to their even power series.

use std::f64::consts::PI;
use std::io::Read;
use std::path::Path;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::jet::{series, Jet};

/// Where a profile comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProfileKind {
    L2,
    FubiniStudy,
    UserSupplied,
}

/// A generator function `A(λ)` on `[0, ∞)`.
pub trait CoefficientProfile: Send + Sync + std::fmt::Debug {
    fn name(&self) -> String;

    fn kind(&self) -> ProfileKind {
        ProfileKind::UserSupplied
    }

    /// Taylor jet of `A` at `λ`.
    fn a_jet(&self, lambda: f64) -> Jet;

    /// Taylor jet of `B = ((1+2λ²)A + (λ+λ³)A')/4`. Loses one order
    /// relative to `a_jet` unless overridden.
    fn b_jet(&self, lambda: f64) -> Jet {
        b_jet_from_a(lambda, &self.a_jet(lambda))
    }

    fn a(&self, lambda: f64) -> f64 {
        self.a_jet(lambda).value()
    }

    fn b(&self, lambda: f64) -> f64 {
        self.b_jet(lambda).value()
    }
}

/// `B` from `A` as jets in `λ`.
pub fn b_jet_from_a(lambda: f64, a: &Jet) -> Jet {
    let l = Jet::variable(lambda);
    let l2 = l * l;
    ((l2 * 2.0 + 1.0) * *a + l * (l2 + 1.0) * a.derivative()) * 0.25
}

/// `μ = (Λ + λ)²` with `Λ = √(1+λ²)`.
pub fn mu_of_lambda(lambda: f64) -> Result<f64> {
    if !(lambda >= 0.0) {
        return Err(GeomError::InvalidInput(format!("λ must be ≥ 0, got {lambda}")));
    }
    Ok(((1.0 + lambda * lambda).sqrt() + lambda).powi(2))
}

/// Inverse of [`mu_of_lambda`]: `λ = (μ − 1)/(2√μ)`.
pub fn lambda_of_mu(mu: f64) -> f64 {
    (mu - 1.0) / (2.0 * mu.sqrt())
}

/// `Λ = √(1+λ²)`.
pub fn big_lambda(lambda: f64) -> f64 {
    (1.0 + lambda * lambda).sqrt()
}

const SERIES_TERMS: usize = 18;
/// Below this `|log μ|` the power series are used.
pub const SERIES_SWITCH: f64 = 0.5;

struct L2Series {
    a: Vec<f64>,
    b: Vec<f64>,
}

fn l2_series() -> &'static L2Series {
    static S: OnceLock<L2Series> = OnceLock::new();
    S.get_or_init(|| {
        let n = SERIES_TERMS;
        let fact = |m: usize| (1..=m).fold(1.0f64, |acc, k| acc * k as f64);
        // (sinh 2x − 2x)/x³, (x cosh x − sinh x)/x³ and sinh x / x in u = x².
        let pa: Vec<f64> = (1..=n).map(|k| 2f64.powi(2 * k as i32 + 1) / fact(2 * k + 1)).collect();
        let pb: Vec<f64> = (1..=n).map(|k| 2.0 * k as f64 / fact(2 * k + 1)).collect();
        let s: Vec<f64> = (0..n).map(|j| 1.0 / fact(2 * j + 1)).collect();
        let s3 = series::mul(&series::mul(&s, &s, n), &s, n);
        let scale = |v: Vec<f64>| v.into_iter().map(|c| PI * c).collect();
        L2Series {
            a: scale(series::div(&pa, &s3, n)),
            b: scale(series::div(&pb, &s3, n)),
        }
    })
}

fn log_mu_jet(lambda: f64) -> Jet {
    Jet::variable(lambda).asinh() * 2.0
}

/// The L² metric generator.
#[derive(Debug, Clone, Copy, Default)]
pub struct L2Profile;

impl CoefficientProfile for L2Profile {
    fn name(&self) -> String {
        "l2".into()
    }

    fn kind(&self) -> ProfileKind {
        ProfileKind::L2
    }

    fn a_jet(&self, lambda: f64) -> Jet {
        let x = log_mu_jet(lambda);
        if x.value().abs() < SERIES_SWITCH {
            return (x * x).polynomial(&l2_series().a);
        }
        let s = x.sinh();
        ((x * 2.0).sinh() - x * 2.0) * PI / s.powi(3)
    }

    fn b_jet(&self, lambda: f64) -> Jet {
        let x = log_mu_jet(lambda);
        if x.value().abs() < SERIES_SWITCH {
            return (x * x).polynomial(&l2_series().b);
        }
        let s = x.sinh();
        (x * x.cosh() - s) * PI / s.powi(3)
    }
}

/// The Fubini–Study metric generator `A = 2μ/(1+μ²) = sech(log μ)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct FubiniStudyProfile;

impl CoefficientProfile for FubiniStudyProfile {
    fn name(&self) -> String {
        "fs".into()
    }

    fn kind(&self) -> ProfileKind {
        ProfileKind::FubiniStudy
    }

    fn a_jet(&self, lambda: f64) -> Jet {
        log_mu_jet(lambda).cosh().recip()
    }

    fn b_jet(&self, lambda: f64) -> Jet {
        let a = self.a_jet(lambda);
        a * a * 0.25
    }
}

pub fn a_l2(lambda: f64) -> f64 {
    L2Profile.a(lambda)
}

pub fn b_l2(lambda: f64) -> f64 {
    L2Profile.b(lambda)
}

pub fn a_fs(lambda: f64) -> f64 {
    FubiniStudyProfile.a(lambda)
}

/// A profile defined by a function of the `λ` jet.
#[derive(Clone)]
pub struct FnProfile {
    name: String,
    f: Arc<dyn Fn(Jet) -> Jet + Send + Sync>,
}

impl FnProfile {
    pub fn new(name: impl Into<String>, f: impl Fn(Jet) -> Jet + Send + Sync + 'static) -> Self {
        Self {
            name: name.into(),
            f: Arc::new(f),
        }
    }
}

impl std::fmt::Debug for FnProfile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FnProfile({})", self.name)
    }
}

impl CoefficientProfile for FnProfile {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn a_jet(&self, lambda: f64) -> Jet {
        (self.f)(Jet::variable(lambda))
    }
}

/// `c·A` for an inner profile `A`.
#[derive(Debug, Clone)]
pub struct ScaledProfile<P> {
    pub inner: P,
    pub factor: f64,
}

impl<P: CoefficientProfile> CoefficientProfile for ScaledProfile<P> {
    fn name(&self) -> String {
        format!("{}*{}", self.factor, self.inner.name())
    }

    fn kind(&self) -> ProfileKind {
        ProfileKind::UserSupplied
    }

    fn a_jet(&self, lambda: f64) -> Jet {
        self.inner.a_jet(lambda) * self.factor
    }

    fn b_jet(&self, lambda: f64) -> Jet {
        self.inner.b_jet(lambda) * self.factor
    }
}

/// One row of a tabulated profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileSample {
    pub lambda: f64,
    pub a: f64,
    pub da: f64,
    pub d2a: f64,
}

/// A profile given at sample points with `A, A', A''`, interpolated by
/// piecewise quintic Hermite polynomials (C² across samples).
#[derive(Debug, Clone)]
pub struct TabulatedProfile {
    name: String,
    samples: Vec<ProfileSample>,
}

impl TabulatedProfile {
    pub fn new(name: impl Into<String>, samples: Vec<ProfileSample>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(GeomError::InvalidInput("a tabulated profile needs at least two rows".into()));
        }
        for s in &samples {
            if ![s.lambda, s.a, s.da, s.d2a].iter().all(|v| v.is_finite()) {
                return Err(GeomError::InvalidInput(format!("non-finite row at λ={}", s.lambda)));
            }
        }
        if samples.windows(2).any(|w| w[1].lambda <= w[0].lambda) {
            return Err(GeomError::InvalidInput("λ column must be strictly increasing".into()));
        }
        if samples[0].lambda < 0.0 {
            return Err(GeomError::InvalidInput("λ column must be nonnegative".into()));
        }
        Ok(Self {
            name: name.into(),
            samples,
        })
    }

    /// Reads CSV with columns `lambda,A,dA,d2A` (header row optional, `#`
    /// lines ignored).
    pub fn from_csv_reader(name: impl Into<String>, reader: impl Read) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut samples = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec?;
            if rec.len() != 4 {
                return Err(GeomError::Parse(format!("row {}: expected 4 columns, got {}", i + 1, rec.len())));
            }
            let parsed: std::result::Result<Vec<f64>, _> = rec.iter().map(str::parse::<f64>).collect();
            match parsed {
                Ok(v) => samples.push(ProfileSample {
                    lambda: v[0],
                    a: v[1],
                    da: v[2],
                    d2a: v[3],
                }),
                Err(_) if i == 0 => continue,
                Err(e) => return Err(GeomError::Parse(format!("row {}: {e}", i + 1))),
            }
        }
        Self::new(name, samples)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "table".into());
        Self::from_csv_reader(name, file)
    }

    /// Samples another profile on a grid.
    pub fn sample(profile: &dyn CoefficientProfile, grid: &[f64]) -> Result<Self> {
        let samples = grid
            .iter()
            .map(|&l| {
                let j = profile.a_jet(l);
                ProfileSample {
                    lambda: l,
                    a: j.value(),
                    da: j.deriv(1),
                    d2a: j.deriv(2),
                }
            })
            .collect();
        Self::new(format!("{}-table", profile.name()), samples)
    }

    pub fn samples(&self) -> &[ProfileSample] {
        &self.samples
    }

    pub fn write_csv(&self, w: impl std::io::Write) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(["lambda", "A", "dA", "d2A"])?;
        for s in &self.samples {
            wtr.write_record([s.lambda, s.a, s.da, s.d2a].iter().map(|v| format!("{v:.17e}")))?;
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn range(&self) -> (f64, f64) {
        (self.samples[0].lambda, self.samples[self.samples.len() - 1].lambda)
    }
}

impl CoefficientProfile for TabulatedProfile {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn a_jet(&self, lambda: f64) -> Jet {
        let (lo, hi) = self.range();
        if !(lambda >= lo && lambda <= hi) {
            return Jet::constant(f64::NAN);
        }
        let idx = self
            .samples
            .partition_point(|s| s.lambda <= lambda)
            .clamp(1, self.samples.len() - 1);
        let (p, q) = (self.samples[idx - 1], self.samples[idx]);
        let h = q.lambda - p.lambda;
        let t = (Jet::variable(lambda) + (-p.lambda)) * (1.0 / h);
        let basis = [
            [1.0, 0.0, 0.0, -10.0, 15.0, -6.0],
            [0.0, 1.0, 0.0, -6.0, 8.0, -3.0],
            [0.0, 0.0, 0.5, -1.5, 1.5, -0.5],
            [0.0, 0.0, 0.0, 0.5, -1.0, 0.5],
            [0.0, 0.0, 0.0, -4.0, 7.0, -3.0],
            [0.0, 0.0, 0.0, 10.0, -15.0, 6.0],
        ];
        let weights = [p.a, h * p.da, h * h * p.d2a, h * h * q.d2a, h * q.da, q.a];
        let mut coeffs = [0.0; 6];
        for (w, b) in weights.iter().zip(&basis) {
            for k in 0..6 {
                coeffs[k] += w * b[k];
            }
        }
        t.polynomial(&coeffs)
    }
}

/// Looks up a built-in profile by name (`l2` or `fs`).
pub fn profile_by_name(name: &str) -> Result<Box<dyn CoefficientProfile>> {
    match name.to_ascii_lowercase().as_str() {
        "l2" => Ok(Box::new(L2Profile)),
        "fs" | "fubini-study" => Ok(Box::new(FubiniStudyProfile)),
        other => Err(GeomError::InvalidInput(format!("unknown profile '{other}' (expected l2 or fs)"))),
    }
}
