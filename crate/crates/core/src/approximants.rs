//! Approximating laws and certified total-variation distance.
//!
//! Every pmf is evaluated in log space. Infinite laws are turned into a
//! [`TruncatedPmf`] whose `tail_mass_bound` is a proven bound on the mass the
//! finite vector does not account for, so [`tv_distance`] can return an
//! interval that is guaranteed to contain the true distance.

use serde::Serialize;

use crate::distributions::DiscreteLaw;
use crate::error::{Error, Result};
use crate::special::{ln_factorial, ln_gamma};

/// Default cap on the number of terms a truncation may use.
pub const MAX_TERMS: u64 = 50_000_000;

/// A finite probability vector on `k_min, k_min + 1, ...` plus a bound on the
/// probability mass it leaves unaccounted for.
///
/// For closed-form laws the unaccounted mass is the tail beyond the vector.
/// For pmfs assembled from truncated series or quadrature it also covers the
/// per-entry approximation error, so `tail_mass_bound` always bounds
/// `sum_k |p_true(k) - p_listed(k)|`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TruncatedPmf {
    k_min: u64,
    probs: Vec<f64>,
    tail_mass_bound: f64,
}

impl TruncatedPmf {
    pub fn new(k_min: u64, probs: Vec<f64>, tail_mass_bound: f64) -> Result<Self> {
        if let Some(p) = probs.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Err(Error::domain(format!("pmf entries must be finite and non-negative, got {p}")));
        }
        if !(tail_mass_bound >= 0.0) {
            return Err(Error::domain(format!("tail mass bound must be non-negative, got {tail_mass_bound}")));
        }
        Ok(TruncatedPmf { k_min, probs, tail_mass_bound })
    }

    pub fn point_mass(k: u64) -> Self {
        TruncatedPmf { k_min: k, probs: vec![1.0], tail_mass_bound: 0.0 }
    }

    /// Exact pmf of a discrete law truncated through its tail certificate.
    pub fn from_law(law: &dyn DiscreteLaw, tol: f64) -> Result<Self> {
        let cert = law.tail();
        truncate_law(|j| law.pmf(j), 1, |j| cert.bound(j), tol, MAX_TERMS)
    }

    pub fn k_min(&self) -> u64 {
        self.k_min
    }

    /// Largest listed outcome (equal to `k_min - 1` when the vector is empty).
    pub fn k_max(&self) -> u64 {
        (self.k_min + self.probs.len() as u64).saturating_sub(1)
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn tail_mass_bound(&self) -> f64 {
        self.tail_mass_bound
    }

    pub fn get(&self, k: u64) -> f64 {
        if k < self.k_min {
            return 0.0;
        }
        self.probs.get((k - self.k_min) as usize).copied().unwrap_or(0.0)
    }

    pub fn mass(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.probs.iter().enumerate().map(move |(i, &p)| (self.k_min + i as u64, p))
    }

    /// Mean of the listed part.
    pub fn mean(&self) -> f64 {
        self.iter().map(|(k, p)| k as f64 * p).sum()
    }

    /// Law of `X + offset`.
    pub fn shifted(&self, offset: i64) -> Result<Self> {
        let k_min = self.k_min as i64 + offset;
        if k_min < 0 {
            return Err(Error::domain("shift moves support below zero"));
        }
        Ok(TruncatedPmf { k_min: k_min as u64, probs: self.probs.clone(), tail_mass_bound: self.tail_mass_bound })
    }
}

/// Certified enclosure `[lo, hi]` of a total-variation distance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TvInterval {
    pub lo: f64,
    pub hi: f64,
}

impl TvInterval {
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!("logarithmic alpha must lie in (0,1), got {alpha}")));
    }
    Ok(())
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::domain(format!("negative binomial beta must lie in (0,1), got {beta}")));
    }
    Ok(())
}

// ln(-ln(1 - alpha)), the log-normaliser of the logarithmic law.
fn ln_log_normaliser(alpha: f64) -> f64 {
    (-(-alpha).ln_1p()).ln()
}

fn ln_log_pmf(alpha: f64, k: u64) -> f64 {
    k as f64 * alpha.ln() - (k as f64).ln() - ln_log_normaliser(alpha)
}

/// `P(L = k) = -alpha^k / (k ln(1 - alpha))` for `L ~ L(alpha)`; zero at `k = 0`.
pub fn log_pmf(alpha: f64, k: u64) -> Result<f64> {
    check_alpha(alpha)?;
    if k == 0 {
        return Ok(0.0);
    }
    Ok(ln_log_pmf(alpha, k).exp())
}

/// Mean of `L(alpha)`: `-alpha / ((1 - alpha) ln(1 - alpha))`.
pub fn log_mean(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(-alpha / ((1.0 - alpha) * (-alpha).ln_1p()))
}

/// `P(Y = k) = e^{-lambda} lambda^k / k!`.
pub fn poisson_pmf(lambda: f64, k: u64) -> Result<f64> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::domain(format!("poisson lambda must be positive, got {lambda}")));
    }
    Ok(poisson_pmf_unchecked(lambda, k))
}

fn poisson_pmf_unchecked(lambda: f64, k: u64) -> f64 {
    (-lambda + k as f64 * lambda.ln() - ln_factorial(k)).exp()
}

/// `P(Z = k) = Γ(ell + k) / (Γ(ell) k!) (1 - beta)^ell beta^k` for `Z ~ NB(ell, 1 - beta)`.
pub fn negbin_pmf(ell: f64, beta: f64, k: u64) -> Result<f64> {
    if !(ell > 0.0 && ell.is_finite()) {
        return Err(Error::domain(format!("negative binomial ell must be positive, got {ell}")));
    }
    check_beta(beta)?;
    Ok(negbin_pmf_unchecked(ell, beta, k))
}

fn negbin_pmf_unchecked(ell: f64, beta: f64, k: u64) -> f64 {
    if ell == 1.0 {
        return (1.0 - beta) * beta.powi(k.min(i32::MAX as u64) as i32);
    }
    let kf = k as f64;
    let ln_coef = ln_gamma(ell + kf) - ln_gamma(ell) - ln_gamma(kf + 1.0);
    (ln_coef + ell * (-beta).ln_1p() + kf * beta.ln()).exp()
}

/// Geometric law on `{1, 2, ...}` with success probability `success`.
pub fn geometric_pmf(success: f64, k: u64) -> Result<f64> {
    if !(success > 0.0 && success < 1.0) {
        return Err(Error::domain(format!("geometric success probability must lie in (0,1), got {success}")));
    }
    if k == 0 {
        return Ok(0.0);
    }
    Ok(((-success).ln_1p() * (k - 1) as f64 + success.ln()).exp())
}

/// Tabulate `pmf(k_min), pmf(k_min + 1), ...` until `remainder(k)` — a proven
/// bound on the mass strictly beyond `k` — drops to `tol`.
pub fn truncate_law<P, R>(pmf: P, k_min: u64, remainder: R, tol: f64, max_terms: u64) -> Result<TruncatedPmf>
where
    P: Fn(u64) -> f64,
    R: Fn(u64) -> f64,
{
    if !(tol > 0.0) {
        return Err(Error::domain(format!("tolerance must be positive, got {tol}")));
    }
    let mut probs = Vec::new();
    let mut best = f64::INFINITY;
    let mut k = k_min;
    loop {
        probs.push(pmf(k));
        let r = remainder(k);
        if r < best {
            best = r;
        }
        if r <= tol {
            return TruncatedPmf::new(k_min, probs, r.max(0.0));
        }
        if probs.len() as u64 >= max_terms {
            return Err(Error::Truncation { terms: probs.len() as u64, achieved: best });
        }
        k += 1;
    }
}

impl TruncatedPmf {
    /// `L(alpha)` on `{1, 2, ...}`.
    pub fn logarithmic(alpha: f64, tol: f64) -> Result<Self> {
        check_alpha(alpha)?;
        let ln_a = alpha.ln();
        let ln_norm = ln_log_normaliser(alpha);
        let ln_1ma = (-alpha).ln_1p();
        truncate_law(
            |k| ln_log_pmf(alpha, k).exp(),
            1,
            // sum_{j>k} alpha^j / (j c) <= alpha^{k+1} / ((k+1) c (1 - alpha))
            |k| ((k + 1) as f64 * ln_a - ((k + 1) as f64).ln() - ln_norm - ln_1ma).exp(),
            tol,
            MAX_TERMS,
        )
    }

    /// `Pois(lambda)` on `{0, 1, ...}`.
    pub fn poisson(lambda: f64, tol: f64) -> Result<Self> {
        poisson_pmf(lambda, 0)?;
        truncate_law(
            |k| poisson_pmf_unchecked(lambda, k),
            0,
            |k| {
                // successive ratios beyond k+1 are at most lambda / (k + 2)
                let rho = lambda / (k + 2) as f64;
                if rho < 1.0 {
                    poisson_pmf_unchecked(lambda, k + 1) / (1.0 - rho)
                } else {
                    f64::INFINITY
                }
            },
            tol,
            MAX_TERMS,
        )
    }

    /// `NB(ell, 1 - beta)` on `{0, 1, ...}`.
    pub fn negative_binomial(ell: f64, beta: f64, tol: f64) -> Result<Self> {
        negbin_pmf(ell, beta, 0)?;
        truncate_law(
            |k| negbin_pmf_unchecked(ell, beta, k),
            0,
            |k| {
                // ratio P(j+1)/P(j) = beta (ell + j) / (j + 1) is monotone in j with limit beta
                let rho = beta.max(beta * (ell + (k + 1) as f64) / (k + 2) as f64);
                if rho < 1.0 {
                    negbin_pmf_unchecked(ell, beta, k + 1) / (1.0 - rho)
                } else {
                    f64::INFINITY
                }
            },
            tol,
            MAX_TERMS,
        )
    }

    /// Geometric law on `{1, 2, ...}` with success probability `success`.
    pub fn geometric(success: f64, tol: f64) -> Result<Self> {
        geometric_pmf(success, 1)?;
        let ln_fail = (-success).ln_1p();
        truncate_law(
            |k| (ln_fail * (k - 1) as f64 + success.ln()).exp(),
            1,
            |k| (ln_fail * k as f64).exp(),
            tol,
            MAX_TERMS,
        )
    }
}

/// Certified total-variation distance `½ Σ |P(k) - Q(k)|`.
///
/// `lo` and `hi` are the listed half-L1 distance minus and plus half the two
/// unaccounted masses, clamped to `[0, 1]`.
pub fn tv_distance(p: &TruncatedPmf, q: &TruncatedPmf) -> TvInterval {
    let start = p.k_min.min(q.k_min);
    let end = p.k_max().max(q.k_max());
    let mut half_l1 = 0.0;
    let mut k = start;
    while k <= end {
        half_l1 += (p.get(k) - q.get(k)).abs();
        k += 1;
    }
    half_l1 *= 0.5;
    let slack = 0.5 * (p.tail_mass_bound + q.tail_mass_bound);
    TvInterval { lo: (half_l1 - slack).clamp(0.0, 1.0), hi: (half_l1 + slack).clamp(0.0, 1.0) }
}
