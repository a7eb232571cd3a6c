//! Logarithmic and Poisson bounds for the number of maxima `K_n`.

use crate::bounds::{check_finite, BoundReport};
use crate::error::{Error, Result};
use crate::maxima::{series_cutoff, KnMoments, KnSpec};

fn moment_fields(report: BoundReport, m: &KnMoments) -> BoundReport {
    report
        .moment("E[K]", m.e1)
        .moment("E[(K)_2]", m.e2)
        .moment("E[(K)_3]", m.e3)
        .moment("P(K=1)", m.p1)
        .moment("P(K=2)", m.p2)
        .with_error(m.truncation_error)
}

fn in_unit_interval(name: &str, x: f64) -> Result<f64> {
    if x > 0.0 && x < 1.0 {
        Ok(x)
    } else {
        Err(Error::degenerate(format!("{name} = {x} lies outside (0,1)")))
    }
}

/// `alpha = 1 - P(K_n = 1) / E[K_n]`.
pub fn log_alpha(m: &KnMoments) -> Result<f64> {
    in_unit_interval("alpha", 1.0 - m.p1 / m.e1)
}

/// Logarithmic bound for a general positive integer `K`, with `alpha = P(K* > 1)`:
/// `-2 ln(1-alpha) (E[K] - 2 (1-alpha)/alpha P(K=2))`.
pub fn general_log_bound(ek: f64, pk2: f64, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!("alpha must lie in (0,1), got {alpha}")));
    }
    if !(ek >= 1.0 && ek.is_finite()) {
        return Err(Error::domain(format!("E[K] must be at least 1, got {ek}")));
    }
    if !(0.0..=1.0).contains(&pk2) {
        return Err(Error::domain(format!("P(K=2) must be a probability, got {pk2}")));
    }
    let value = -2.0 * (-alpha).ln_1p() * (ek - 2.0 * (1.0 - alpha) / alpha * pk2);
    if value < 0.0 {
        return Err(Error::domain("inputs are inconsistent: bound is negative"));
    }
    Ok(value)
}

/// Logarithmic approximation of `K_n` by `L(alpha)`, summed directly over the
/// law of `X`:
///
/// ```text
/// -2 n ln(1-alpha) sum_j p(j) (F(j)^{n-1} - (1-alpha)(n-1)/alpha p(j) F(j-1)^{n-2})
/// ```
pub fn thm1a_bound(spec: &KnSpec, tol: f64) -> Result<BoundReport> {
    let m = KnMoments::compute(spec, tol)?;
    thm1a_bound_with(spec, &m, tol)
}

/// [`thm1a_bound`] reusing precomputed moments.
pub fn thm1a_bound_with(spec: &KnSpec, m: &KnMoments, tol: f64) -> Result<BoundReport> {
    let n = spec.n();
    if n < 2 {
        return Err(Error::degenerate("alpha = 0 when n = 1"));
    }
    let alpha = log_alpha(m)?;
    let law = spec.law();
    let c = (1.0 - alpha) * (n - 1) as f64 / alpha;
    let scale = -2.0 * n as f64 * (-alpha).ln_1p();
    let cert = law.tail();
    let ln_weight = (scale * (1.0 + c)).ln();
    let last = series_cutoff(cert, 1, ln_weight, tol)?;
    let (e_max, e_pair) = ((n - 1) as f64, (n - 2) as f64);
    let mut sum = 0.0;
    for j in 1..=last {
        let ln_p = law.ln_pmf(j);
        if ln_p == f64::NEG_INFINITY {
            continue;
        }
        let first = (ln_p + e_max * law.ln_cdf(j)).exp();
        let second = if n == 2 { (2.0 * ln_p).exp() } else { (2.0 * ln_p + e_pair * law.ln_cdf(j - 1)).exp() };
        sum += first - c * second;
    }
    let bound = check_finite("logarithmic bound", scale * sum)?;
    let error = m.truncation_error + (ln_weight + cert.ln_bound(last)).exp();
    Ok(moment_fields(BoundReport::new(bound), m)
        .param("alpha", alpha)
        .param("n", n as f64)
        .with_error(error))
}

/// `beta = 1 - E[K_n] / E[K_n^2]`.
pub fn negbin_beta(m: &KnMoments) -> Result<f64> {
    in_unit_interval("beta", 1.0 - m.e1 / m.second_moment())
}

/// Logarithmic approximation of `K_n` by `L(beta)` via the size-biased law.
pub fn thm1b_bound(spec: &KnSpec, tol: f64) -> Result<BoundReport> {
    if spec.n() < 4 {
        return Err(Error::domain(format!("the size-biased logarithmic bound needs n >= 4, got {}", spec.n())));
    }
    thm1b_from_moments(&KnMoments::compute(spec, tol)?)
}

/// `-2(1+beta) ln(1-beta) E[K^2] (beta + (1-beta)[E(K)_3/E(K)_2 - (n-3)E(K)_2/((n-1)E K)])`.
pub fn thm1b_from_moments(m: &KnMoments) -> Result<BoundReport> {
    let n = m.n;
    if n < 4 {
        return Err(Error::domain(format!("the size-biased logarithmic bound needs n >= 4, got {n}")));
    }
    if !(m.e2 > 0.0) {
        return Err(Error::degenerate("E[(K)_2] vanishes"));
    }
    let beta = negbin_beta(m)?;
    let nf = n as f64;
    let bracket = m.e3 / m.e2 - (nf - 3.0) * m.e2 / ((nf - 1.0) * m.e1);
    let value = -2.0 * (1.0 + beta) * (-beta).ln_1p() * m.second_moment() * (beta + (1.0 - beta) * bracket);
    let bound = check_finite("size-biased logarithmic bound", value)?;
    Ok(moment_fields(BoundReport::new(bound), m).param("beta", beta).param("n", nf))
}

/// `-2(1+beta) ln(1-beta) / beta * E[K] * d_TV(K*, Geom(1-beta))`.
pub fn lemma1_link_bound(ek: f64, beta: f64, tv_star_geom: f64) -> Result<f64> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::domain(format!("beta must lie in (0,1), got {beta}")));
    }
    if !(ek > 0.0 && ek.is_finite()) {
        return Err(Error::domain(format!("E[K] must be positive, got {ek}")));
    }
    if !(0.0..=1.0).contains(&tv_star_geom) {
        return Err(Error::domain(format!("total variation must lie in [0,1], got {tv_star_geom}")));
    }
    Ok(-2.0 * (1.0 + beta) * (-beta).ln_1p() / beta * ek * tv_star_geom)
}

/// Poisson approximation of `K_n` by `Pois(lambda)`, `lambda = E[(K_n)_2] / E[K_n]`.
pub fn thm2_poisson_bound(spec: &KnSpec, tol: f64) -> Result<BoundReport> {
    if spec.n() < 3 {
        return Err(Error::domain(format!("the Poisson bound needs n >= 3, got {}", spec.n())));
    }
    thm2_from_moments(&KnMoments::compute(spec, tol)?)
}

/// The Poisson bound from precomputed moments.
pub fn thm2_from_moments(m: &KnMoments) -> Result<BoundReport> {
    let n = m.n;
    if n < 3 {
        return Err(Error::domain(format!("the Poisson bound needs n >= 3, got {n}")));
    }
    if !(m.e2 > 0.0) {
        return Err(Error::degenerate("E[(K)_2] vanishes, so lambda = 0"));
    }
    let nf = n as f64;
    let variance = m.variance();
    let slack = 8.0 * m.truncation_error * (1.0 + m.e1) + 1e-12 * m.e1 * m.e1;
    if variance < -slack {
        return Err(Error::numeric(format!("Var(K_n) evaluated to {variance}")));
    }
    let value = variance.max(0.0).sqrt() / (2.0 * m.e1)
        + (m.e1 / (4.0 * m.e2)).sqrt()
        + (nf - 1.0) * m.e3 / ((nf - 2.0) * m.e2)
        - (nf - 2.0) * m.e2 / ((nf - 1.0) * m.e1);
    let bound = check_finite("Poisson bound", value)?;
    Ok(moment_fields(BoundReport::new(bound), m).param("lambda", m.e2 / m.e1).param("n", nf))
}

/// Round half away from zero to `digits` decimals.
pub fn round_half_away(x: f64, digits: i32) -> f64 {
    let scale = 10f64.powi(digits);
    let y = x * scale;
    let r = y.abs().floor() + if y.abs().fract() >= 0.5 { 1.0 } else { 0.0 };
    r.copysign(y) / scale
}
