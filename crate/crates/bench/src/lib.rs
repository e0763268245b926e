//! Inputs shared by the benchmarks.

use optapprox::families::{eta, one_plus_z_pow};
use optapprox::{Exact, Float, Series};

/// `(1 + z)^3` in the exact backend.
pub fn cube() -> Series<Exact> {
    one_plus_z_pow(3).expect("valid power")
}

/// A fixed degree-12 polynomial with complex coefficients and `f(0) = 1`.
pub fn dense_polynomial() -> Series<Float> {
    let coeffs = (0..13)
        .map(|k| {
            let t = k as f64;
            Float::new((0.7 * t).cos() / (1.0 + t), (0.3 * t).sin() / (1.0 + t))
        })
        .collect();
    Series::polynomial(coeffs)
}

/// `(1 + z) / (1 - z)` truncated at degree `m`.
pub fn eta_one(m: usize) -> Series<Float> {
    eta(1.0, m).expect("valid eta")
}
