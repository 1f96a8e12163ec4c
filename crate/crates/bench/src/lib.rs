//! Shared fixtures for the criterion benchmarks.

use lumpgeom_core::dynamics::{FlowState, InitialCondition};

/// A generic off-axis starting point for geodesic steps.
pub fn generic_state() -> FlowState {
    InitialCondition {
        lambda: [0.4, -0.3, 1.1],
        rotation: [0.3, 1.0, -0.5],
        lambda_dot: [0.2, 0.1, -0.3],
        omega: [0.5, -0.4, 0.8],
    }
    .to_state()
    .expect("fixed initial condition is valid")
}
