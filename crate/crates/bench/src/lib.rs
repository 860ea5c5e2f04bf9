//! Fixtures shared by the benchmarks.

use ruin_core::ModelSpec;

pub const THETAS: [f64; 4] = [-1.0, -0.5, 0.5, 1.0];

pub fn poisson(theta: f64) -> ModelSpec {
    ModelSpec::classical(1.5, 1.0, 1.0, theta).expect("valid model")
}

pub fn erlang2(theta: f64) -> ModelSpec {
    ModelSpec::erlang2(1.5, 1.0, 2.0, theta).expect("valid model")
}
