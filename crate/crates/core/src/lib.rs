//! Numerical geometry of the L² metric on spaces of rational maps of the
//! Riemann sphere.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Index loops mirror the component formulas.
#![allow(clippy::needless_range_loop)]

pub mod curvature;
pub mod dynamics;
pub mod error;
pub mod euler;
pub mod global;
pub mod invariant;
pub mod jet;
pub mod l2;
pub mod profile;
pub mod quadrature;
pub mod rational_maps;
pub mod refine;
pub mod rp2;
pub mod sphere;
pub mod sum;
pub mod table;

pub use error::{GeomError, Result};
pub use quadrature::SphereQuadrature;
pub use rational_maps::{MoebiusPolar, RationalMap};
pub use sphere::ExtendedComplex;
