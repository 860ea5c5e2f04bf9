//! Parameters and printed results of the three published examples.

pub const C: f64 = 1.5;
pub const ALPHA: f64 = 1.0;
pub const LAMBDA: f64 = 1.0;
pub const BETA: f64 = 2.0;
pub const B: f64 = 20.0;

/// Printed `(coefficient, exponent)` pairs.
pub type Terms = &'static [(f64, f64)];

/// `(θ, φ(0), [(coefficient, exponent)])` for Poisson arrivals.
pub const EXAMPLE1: [(f64, f64, Terms); 3] = [
    (-0.5, 0.3147, &[(-0.6958, -0.2976), (0.0105, -2.1148)]),
    (0.0, 0.3333, &[(-0.6667, -0.3333)]),
    (0.5, 0.3548, &[(-0.6311, -0.3788), (-0.0140, -1.8736)]),
];

/// `(θ, δ(0), [(coefficient, exponent)])` for Erlang(2) arrivals.
pub const EXAMPLE2: [(f64, f64, Terms); 4] = [
    (-1.0, 0.3713, &[(-0.6458, -0.3488), (0.0171, -2.1517)]),
    (-0.5, 0.3963, &[(-0.6134, -0.3833), (0.0098, -2.0792)]),
    (0.5, 0.4579, &[(-0.5289, -0.4762), (-0.0132, -1.9119)]),
    (1.0, 0.4957, &[(-0.4723, -0.5410), (-0.0320, -1.8116)]),
];

/// `(θ, [(coefficient, exponent)])` of `χ(u, 20)`.
pub const EXAMPLE3: [(f64, Terms); 4] = [
    (-1.0, &[(0.0186, -2.2207), (-0.7223, -0.2687)]),
    (-0.5, &[(0.0105, -2.1148), (-0.6970, -0.2976)]),
    (0.5, &[(-0.0140, -1.8736), (-0.6314, -0.3788)]),
    (1.0, &[(-0.0335, -1.7305), (-0.5866, -0.4392)]),
];
