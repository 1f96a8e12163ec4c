//! Dense complex polynomials stored in ascending-power order.

use num_complex::Complex64;

pub type Poly = Vec<Complex64>;

#[inline]
pub fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// Value and first derivative.
#[inline]
pub fn horner_d(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let zero = Complex64::new(0.0, 0.0);
    let mut p = zero;
    let mut dp = zero;
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

pub fn mul(a: &[Complex64], b: &[Complex64]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn pow(a: &[Complex64], k: usize) -> Poly {
    let mut out = vec![Complex64::new(1.0, 0.0)];
    for _ in 0..k {
        out = mul(&out, a);
    }
    out
}

/// `∏ (z − r)` for the given roots.
pub fn from_roots(roots: &[Complex64]) -> Poly {
    roots
        .iter()
        .fold(vec![Complex64::new(1.0, 0.0)], |acc, &r| mul(&acc, &[-r, Complex64::new(1.0, 0.0)]))
}

/// Pads with zeros up to `len` coefficients.
pub fn padded(mut p: Poly, len: usize) -> Poly {
    if p.len() < len {
        p.resize(len, Complex64::new(0.0, 0.0));
    }
    p
}

/// Roots by Durand–Kerner iteration. Intended for test oracles and
/// diagnostics on low-degree polynomials, not as a robust root finder.
pub fn roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut c: Vec<Complex64> = coeffs.to_vec();
    while c.len() > 1 && c.last().is_some_and(|x| x.norm() == 0.0) {
        c.pop();
    }
    let deg = c.len().saturating_sub(1);
    if deg == 0 {
        return Vec::new();
    }
    let lead = c[deg];
    let monic: Vec<Complex64> = c.iter().map(|&x| x / lead).collect();
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..deg).map(|k| seed.powu(k as u32)).collect();
    for _ in 0..500 {
        let mut delta: f64 = 0.0;
        for i in 0..deg {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..deg {
                if i != j {
                    denom *= z[i] - z[j];
                }
            }
            let step = horner(&monic, z[i]) / denom;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 {
            break;
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn horner_derivative_matches_difference() {
        let p = vec![c(1.0, 2.0), c(-0.5, 0.0), c(0.0, 3.0), c(2.0, -1.0)];
        let z = c(0.3, -0.7);
        let (_, dp) = horner_d(&p, z);
        let h = 1e-6;
        let fd = (horner(&p, z + h) - horner(&p, z - h)) / (2.0 * h);
        assert!((dp - fd).norm() < 1e-8);
    }

    #[test]
    fn roots_of_product_are_recovered() {
        let r = [c(1.0, 0.0), c(-2.0, 1.0), c(0.0, 3.0)];
        let p = from_roots(&r);
        let mut found = roots(&p);
        for root in r {
            let (idx, d) = found
                .iter()
                .enumerate()
                .map(|(i, z)| (i, (z - root).norm()))
                .fold((0, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a });
            assert!(d < 1e-10);
            found.remove(idx);
        }
    }
}
