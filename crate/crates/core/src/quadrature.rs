//! Gauss–Legendre rules and the two-chart product quadrature on the sphere.
//!
//! The sphere is split into the disk `|z| ≤ 1` and its mirror `|w| ≤ 1`,
//! `w = 1/z`. Both are covered by a polar tensor-product rule (Gauss–Legendre
//! in the radius, optionally on graded panels, and in the angle). The round
//! measure `dxdy/(1+|z|²)²` has the same form in both charts, so integrands
//! only need to know which chart a node lives in.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Nodes per direction per chart used when nothing else is requested.
pub const DEFAULT_ORDER: usize = 64;

/// `(P_n(z), P_n'(z))` from the three-term recurrence.
fn legendre(n: usize, z: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, z);
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    if n == 1 {
        return (z, 1.0);
    }
    (p1, n as f64 * (z * p1 - p0) / (z * z - 1.0))
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, by Newton iteration.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0, "Gauss-Legendre order must be positive");
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(n, z);
            let dz = p / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre(n, z);
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Gauss–Legendre rule mapped to `[a, b]`.
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(n);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    x.iter().zip(&w).map(|(&xi, &wi)| (mid + half * xi, half * wi)).collect()
}

/// Composite Gauss–Legendre integral of `f` over consecutive panels.
pub fn integrate_panels(f: impl Fn(f64) -> f64, breaks: &[f64], order: usize) -> f64 {
    let mut acc = crate::sum::CompensatedSum::new();
    for pair in breaks.windows(2) {
        for (x, w) in gauss_legendre_on(order, pair[0], pair[1]) {
            acc.add(w * f(x));
        }
    }
    acc.value()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Chart {
    /// `|z| ≤ 1`, node point is `z`.
    Inner,
    /// `|z| ≥ 1`, node point is `w = 1/z`.
    Outer,
}

#[derive(Debug, Clone, Copy)]
pub struct QuadNode {
    pub chart: Chart,
    /// Local coordinate (`z` or `w`), `|point| ≤ 1`.
    pub point: Complex64,
    /// Weight for `dx dy` in the local coordinate.
    pub weight: f64,
}

/// Node set for integrals over the whole sphere.
#[derive(Debug, Clone)]
pub struct SphereQuadrature {
    radial_order: usize,
    angular_order: usize,
    radial_breaks: Vec<f64>,
    /// Tolerance used by operations that confirm convergence by refinement.
    pub convergence_tol: f64,
    nodes: Vec<QuadNode>,
}

impl SphereQuadrature {
    /// `order` angular and `order` radial nodes per chart. From order 16 up
    /// the radial nodes are spread over four panels `[0, 1/64, 1/16, 1/4, 1]`
    /// so maps concentrated near a chart centre are still resolved.
    pub fn new(order: usize) -> Self {
        if order >= 16 {
            Self::with_panels(order / 4, order, vec![0.0, 1.0 / 64.0, 1.0 / 16.0, 0.25, 1.0])
        } else {
            Self::with_panels(order, order, vec![0.0, 1.0])
        }
    }

    /// Radial panels with breakpoints `breaks` (from 0 to 1), `radial_order`
    /// nodes per panel and `angular_order` angular nodes.
    pub fn with_panels(radial_order: usize, angular_order: usize, breaks: Vec<f64>) -> Self {
        assert!(radial_order > 0 && angular_order > 0);
        assert!(breaks.len() >= 2 && breaks[0] == 0.0 && *breaks.last().unwrap() == 1.0);
        let mut nodes = Vec::new();
        let angular = gauss_legendre_on(angular_order, 0.0, 2.0 * PI);
        for chart in [Chart::Inner, Chart::Outer] {
            for pair in breaks.windows(2) {
                for (r, wr) in gauss_legendre_on(radial_order, pair[0], pair[1]) {
                    for &(t, wt) in &angular {
                        nodes.push(QuadNode {
                            chart,
                            point: Complex64::from_polar(r, t),
                            weight: wr * wt * r,
                        });
                    }
                }
            }
        }
        Self {
            radial_order,
            angular_order,
            radial_breaks: breaks,
            convergence_tol: 1e-9,
            nodes,
        }
    }

    /// Radial panels refined geometrically towards the chart centres, down to
    /// `r_min`, each panel spanning a factor `ratio`.
    pub fn graded(radial_order: usize, angular_order: usize, r_min: f64, ratio: f64) -> Self {
        assert!(r_min > 0.0 && r_min < 1.0 && ratio > 1.0);
        let mut breaks = vec![1.0];
        let mut r = 1.0;
        while r > r_min {
            r /= ratio;
            breaks.push(r);
        }
        breaks.push(0.0);
        breaks.reverse();
        Self::with_panels(radial_order, angular_order, breaks)
    }

    /// Same panel structure with twice the nodes in each direction.
    pub fn refined(&self) -> Self {
        let mut q = Self::with_panels(2 * self.radial_order, 2 * self.angular_order, self.radial_breaks.clone());
        q.convergence_tol = self.convergence_tol;
        q
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.convergence_tol = tol;
        self
    }

    pub fn nodes(&self) -> &[QuadNode] {
        &self.nodes
    }

    /// Radial nodes per chart over all panels.
    pub fn order(&self) -> usize {
        self.radial_order * self.panel_count()
    }

    pub fn angular_order(&self) -> usize {
        self.angular_order
    }

    pub fn panel_count(&self) -> usize {
        self.radial_breaks.len() - 1
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// `∫ f dμ` for the round unit-sphere area `4 dxdy/(1+|z|²)²`, with `f`
    /// given as a function of the point on the sphere.
    pub fn integrate_area(&self, f: impl Fn(crate::sphere::ExtendedComplex) -> f64) -> f64 {
        let mut acc = crate::sum::CompensatedSum::new();
        for node in &self.nodes {
            let z = match node.chart {
                Chart::Inner => crate::sphere::ExtendedComplex::Finite(node.point),
                Chart::Outer => crate::sphere::ExtendedComplex::Finite(node.point).recip(),
            };
            let conformal = 4.0 / (1.0 + node.point.norm_sqr()).powi(2);
            acc.add(node.weight * conformal * f(z));
        }
        acc.value()
    }
}

impl Default for SphereQuadrature {
    fn default() -> Self {
        Self::new(DEFAULT_ORDER)
    }
}
