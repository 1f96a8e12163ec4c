//! Truncated Taylor series in one variable ("jets"), used to get exact
//! derivatives of the closed-form profiles without finite differences.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Number of Taylor coefficients carried (derivatives up to order 5).
pub const JET_LEN: usize = 6;

/// `f(t₀ + h) = Σ c[k] hᵏ`, truncated after `JET_LEN` terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub c: [f64; JET_LEN],
}

const FACT: [f64; JET_LEN] = [1.0, 1.0, 2.0, 6.0, 24.0, 120.0];

impl Jet {
    pub fn constant(v: f64) -> Self {
        let mut c = [0.0; JET_LEN];
        c[0] = v;
        Self { c }
    }

    /// The independent variable at `t₀`.
    pub fn variable(t0: f64) -> Self {
        let mut c = [0.0; JET_LEN];
        c[0] = t0;
        c[1] = 1.0;
        Self { c }
    }

    /// From derivative values `f, f', f'', …` (missing ones are zero).
    pub fn from_derivatives(d: &[f64]) -> Self {
        let mut c = [0.0; JET_LEN];
        for (k, v) in d.iter().take(JET_LEN).enumerate() {
            c[k] = v / FACT[k];
        }
        Self { c }
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// k-th derivative at the base point.
    pub fn deriv(&self, k: usize) -> f64 {
        self.c[k] * FACT[k]
    }

    /// Jet of the derivative; the top coefficient is lost.
    pub fn derivative(&self) -> Self {
        let mut c = [0.0; JET_LEN];
        for k in 0..JET_LEN - 1 {
            c[k] = (k + 1) as f64 * self.c[k + 1];
        }
        Self { c }
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut c = self.c;
        c.iter_mut().for_each(|x| *x *= s);
        Self { c }
    }

    /// `f(self)` given `[f(x₀), f'(x₀), f''(x₀), …]` at `x₀ = self.value()`.
    pub fn compose(&self, derivs: [f64; JET_LEN]) -> Self {
        let mut h = *self;
        h.c[0] = 0.0;
        let mut out = Jet::constant(derivs[0]);
        let mut power = Jet::constant(1.0);
        for (k, d) in derivs.iter().enumerate().skip(1) {
            power = power * h;
            out = out + power.scale(d / FACT[k]);
        }
        out
    }

    pub fn recip(&self) -> Self {
        let x = self.c[0];
        let mut d = [0.0; JET_LEN];
        let mut v = 1.0 / x;
        for (k, dk) in d.iter_mut().enumerate() {
            *dk = v;
            v *= -((k + 1) as f64) / x;
        }
        self.compose(d)
    }

    pub fn exp(&self) -> Self {
        self.compose([self.c[0].exp(); JET_LEN])
    }

    pub fn ln(&self) -> Self {
        let x = self.c[0];
        let mut d = [0.0; JET_LEN];
        d[0] = x.ln();
        let mut v = 1.0 / x;
        for k in 1..JET_LEN {
            d[k] = v;
            v *= -(k as f64) / x;
        }
        self.compose(d)
    }

    pub fn sqrt(&self) -> Self {
        self.powf(0.5)
    }

    pub fn powf(&self, p: f64) -> Self {
        let x = self.c[0];
        let mut d = [0.0; JET_LEN];
        let mut coef = 1.0;
        for (k, dk) in d.iter_mut().enumerate() {
            *dk = coef * x.powf(p - k as f64);
            coef *= p - k as f64;
        }
        self.compose(d)
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut out = Jet::constant(1.0);
        for _ in 0..n {
            out = out * *self;
        }
        out
    }

    pub fn sinh(&self) -> Self {
        let (s, c) = (self.c[0].sinh(), self.c[0].cosh());
        self.compose([s, c, s, c, s, c])
    }

    pub fn cosh(&self) -> Self {
        let (s, c) = (self.c[0].sinh(), self.c[0].cosh());
        self.compose([c, s, c, s, c, s])
    }

    pub fn asinh(&self) -> Self {
        // Derivative (1+x²)^{-1/2}, composed as a jet itself.
        let x = self.c[0];
        let inner = Jet::variable(x);
        let g = (inner * inner + Jet::constant(1.0)).powf(-0.5);
        let mut d = [0.0; JET_LEN];
        d[0] = x.asinh();
        for k in 1..JET_LEN {
            d[k] = g.deriv(k - 1);
        }
        self.compose(d)
    }

    /// Evaluates `Σ coeffs[k] selfᵏ` by Horner's rule.
    pub fn polynomial(&self, coeffs: &[f64]) -> Self {
        coeffs
            .iter()
            .rev()
            .fold(Jet::constant(0.0), |acc, &a| acc * *self + Jet::constant(a))
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(mut self, o: Jet) -> Jet {
        for k in 0..JET_LEN {
            self.c[k] += o.c[k];
        }
        self
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(mut self, o: Jet) -> Jet {
        for k in 0..JET_LEN {
            self.c[k] -= o.c[k];
        }
        self
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let mut c = [0.0; JET_LEN];
        for i in 0..JET_LEN {
            for j in 0..JET_LEN - i {
                c[i + j] += self.c[i] * o.c[j];
            }
        }
        Jet { c }
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, o: Jet) -> Jet {
        // Long division of truncated series.
        let mut c = [0.0; JET_LEN];
        for k in 0..JET_LEN {
            let mut s = self.c[k];
            for j in 0..k {
                s -= c[j] * o.c[k - j];
            }
            c[k] = s / o.c[0];
        }
        Jet { c }
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(mut self, o: f64) -> Jet {
        self.c[0] += o;
        self
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, o: f64) -> Jet {
        self.scale(o)
    }
}

/// Coefficients of power series in `u`, truncated to `len` terms.
pub(crate) mod series {
    pub fn mul(a: &[f64], b: &[f64], len: usize) -> Vec<f64> {
        let mut c = vec![0.0; len];
        for (i, x) in a.iter().enumerate().take(len) {
            for (j, y) in b.iter().enumerate().take(len - i) {
                c[i + j] += x * y;
            }
        }
        c
    }

    pub fn div(a: &[f64], b: &[f64], len: usize) -> Vec<f64> {
        let mut c = vec![0.0; len];
        for k in 0..len {
            let mut s = a.get(k).copied().unwrap_or(0.0);
            for j in 0..k {
                s -= c[j] * b.get(k - j).copied().unwrap_or(0.0);
            }
            c[k] = s / b[0];
        }
        c
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn product_rule_and_quotient() {
        let x = Jet::variable(0.7);
        let f = (x * x + 1.0) / (x.exp());
        // f = (x²+1)e^{-x}; f' = (2x − x² − 1)e^{-x}; f'' = (x² − 4x + 3)e^{-x}
        let e = (-0.7f64).exp();
        assert!(close(f.deriv(1), (1.4 - 0.49 - 1.0) * e, 1e-15));
        assert!(close(f.deriv(2), (0.49 - 2.8 + 3.0) * e, 1e-15));
    }

    #[test]
    fn elementary_functions_match_closed_forms() {
        let x = Jet::variable(1.3);
        let a = x.asinh();
        let g = |t: f64| (1.0 + t * t).powf(-0.5);
        assert!(close(a.deriv(1), g(1.3), 1e-15));
        assert!(close(a.deriv(2), -1.3 * (1.0f64 + 1.69).powf(-1.5), 1e-14));
        let l = x.ln();
        assert!(close(l.deriv(3), 2.0 / 1.3f64.powi(3), 1e-14));
        let s = x.sqrt();
        assert!(close(s.deriv(2), -0.25 * 1.3f64.powf(-1.5), 1e-14));
        let sh = x.sinh();
        assert!(close(sh.deriv(5), 1.3f64.cosh(), 1e-14));
        assert!(close(x.recip().deriv(4), 24.0 / 1.3f64.powi(5), 1e-13));
    }

    #[test]
    fn composition_of_inverse_functions_is_identity() {
        let x = Jet::variable(0.4);
        let y = x.sinh().asinh();
        assert!(close(y.deriv(1), 1.0, 1e-14));
        for k in 2..JET_LEN {
            assert!(y.deriv(k).abs() < 1e-12, "k={k}: {}", y.deriv(k));
        }
    }
}
