//! Log-space combinatorics and special functions.
//!
//! Binomial coefficients and falling factorials are needed for `n` up to
//! `1e9`, where `ln Γ(n)` is about `2e10` and a difference of two log-gamma
//! values would lose most significant digits. For small `k` the coefficient is
//! therefore assembled as a direct sum of logarithms.

pub use statrs::function::beta::beta_reg;
pub use statrs::function::gamma::ln_gamma;

const DIRECT_SUM_LIMIT: u64 = 4096;

/// `ln C(n, k)`; `-inf` when `k > n`.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    let k = k.min(n - k);
    if k == 0 {
        return 0.0;
    }
    if k <= DIRECT_SUM_LIMIT {
        (0..k)
            .map(|i| ((n - i) as f64).ln() - ((i + 1) as f64).ln())
            .sum()
    } else {
        ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0)
    }
}

/// Falling factorial `(n)_l = n (n-1) ... (n-l+1)` as a float.
pub fn falling_factorial(n: u64, l: u64) -> f64 {
    if l > n {
        return 0.0;
    }
    (0..l).map(|i| (n - i) as f64).product()
}

/// `ln (n)_l`; `-inf` when `l > n`.
pub fn ln_falling_factorial(n: u64, l: u64) -> f64 {
    if l > n {
        return f64::NEG_INFINITY;
    }
    (0..l).map(|i| ((n - i) as f64).ln()).sum()
}

/// `ln k!`, summed directly for small `k`.
pub fn ln_factorial(k: u64) -> f64 {
    if k <= 32 {
        return (2..=k).map(|i| (i as f64).ln()).sum();
    }
    ln_gamma(k as f64 + 1.0)
}

/// Binomial pmf `C(m, k) q^k (1-q)^(m-k)` evaluated in log space.
pub fn binomial_pmf(m: u64, q: f64, k: u64) -> f64 {
    if k > m {
        return 0.0;
    }
    if q <= 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    if q >= 1.0 {
        return if k == m { 1.0 } else { 0.0 };
    }
    let ln = ln_binomial(m, k) + k as f64 * q.ln() + (m - k) as f64 * (-q).ln_1p();
    ln.exp()
}
