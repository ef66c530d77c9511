//! Scalar special functions for the Nakagami/Alzer machinery and the
//! erf-based closed forms.

use alloc::vec::Vec;
use core::f64::consts::PI;

/// Largest fading order supported by the log-space factorial helpers.
pub const MAX_FADING_ORDER: u32 = 20;

/// `ln(n!)` by direct summation of logarithms.
pub fn ln_factorial(n: u32) -> f64 {
    (2..=n).map(|i| libm::log(i as f64)).sum()
}

/// Binomial coefficient `C(n, k)` evaluated in log space.
pub fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    libm::round(libm::exp(ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)))
}

/// `Psi(N, x) = 1 - (1 + x)^(-N)`; the per-interferer Laplace penalty of a
/// unit-mean Gamma(N) fading power.
pub fn psi(n: u32, x: f64) -> f64 {
    // -expm1(-N log1p(x)) keeps precision for tiny x.
    -libm::expm1(-(n as f64) * libm::log1p(x))
}

/// `eta(N) = N (N!)^(-1/N)`, the Alzer constant for a Gamma(N, 1/N) variable.
pub fn eta(n: u32) -> f64 {
    let nf = n as f64;
    nf * libm::exp(-ln_factorial(n) / nf)
}

/// Signed Alzer weights `(-1)^(i+1) C(N, i)` for `i = 1..=N`.
pub fn alzer_weights(n: u32) -> Vec<f64> {
    (1..=n)
        .map(|i| {
            let sign = if i % 2 == 1 { 1.0 } else { -1.0 };
            sign * binomial(n, i)
        })
        .collect()
}

pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

/// Scaled complementary error function `exp(x^2) erfc(x)` for `x >= 0`.
pub fn erfcx(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x < 25.0 {
        libm::exp(x * x) * libm::erfc(x)
    } else {
        // asymptotic series; relative error below 1e-12 at x = 25
        let inv2 = 1.0 / (x * x);
        let series = 1.0 - 0.5 * inv2 + 0.75 * inv2 * inv2 - 1.875 * inv2 * inv2 * inv2
            + 6.5625 * inv2 * inv2 * inv2 * inv2;
        series / (x * libm::sqrt(PI))
    }
}
