//! Rational maps of the Riemann sphere and their symmetries.

pub mod involution;
pub mod moebius;
pub mod poly;
pub mod rational;

pub use involution::{antipodal_involution, check_rp2_equivariance, is_rp2_equivariant};
pub use moebius::{
    canonical_sign, g0_act, pauli, polar_decompose, projective_line_distance, projective_matrix_distance, rotation_of, su2_exp,
    unitary_aligning_e3, CMat2, MoebiusPolar,
};
pub use rational::{random_map, sphere_grid, LocalValue, MapJson, RationalMap, RESULTANT_TOL};
