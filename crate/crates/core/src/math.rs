//! Scalar helpers: binomial coefficients, log-factorials, complex phases.

#[allow(unused_imports)]
use num_traits::Float;

use num_complex::Complex64;

/// Largest `n` for which `C(n, k)` is computed by exact integer arithmetic;
/// `C(60, 30)` is about `1.18e17`, still exact in `u128`. Larger inputs go
/// through log-gamma so big sectors stay overflow-free.
const EXACT_BINOMIAL_MAX: usize = 60;

/// `ln Gamma(x)` for positive `x`.
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// `ln(n!)`.
pub fn ln_factorial(n: usize) -> f64 {
    ln_gamma(n as f64 + 1.0)
}

/// `ln C(n, k)`; requires `k <= n`.
pub fn ln_binomial(n: usize, k: usize) -> f64 {
    debug_assert!(k <= n);
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// Binomial coefficient `C(n, k)` as `f64`, exact for `n <= 60`.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    if n <= EXACT_BINOMIAL_MAX {
        let mut c: u128 = 1;
        for i in 0..k {
            c = c * (n - i) as u128 / (i + 1) as u128;
        }
        c as f64
    } else {
        ln_binomial(n, k).exp()
    }
}

/// `e^{i theta}`.
pub fn cis(theta: f64) -> Complex64 {
    Complex64::new(theta.cos(), theta.sin())
}

/// `z^n` for non-negative integer exponents, with `z^0 = 1` even at `z = 0`.
pub fn cpowu(z: Complex64, mut n: usize) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    let mut base = z;
    while n > 0 {
        if n & 1 == 1 {
            acc *= base;
        }
        base *= base;
        n >>= 1;
    }
    acc
}

/// `i^m` for possibly negative `m`.
pub fn ipow(m: i64) -> Complex64 {
    match m.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}
