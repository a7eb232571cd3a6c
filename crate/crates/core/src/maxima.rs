//! The number of sample values tied with the maximum of `n` i.i.d. draws from
//! a law on the positive integers.
//!
//! Everything here reduces to series of the form
//!
//! ```text
//! w * sum_{j >= 1} p(j)^a F(j - lag)^b
//! ```
//!
//! with `a >= 1`. Since `F <= 1` and `sum_{j>J} p(j)^a <= P(X > J)^a`, the
//! remainder after `J` terms is at most `w * P(X > J)^a`, which the law's tail
//! certificate bounds. The partial sums are lower bounds of the exact values.

use std::sync::Arc;

use serde::Serialize;

use crate::approximants::{TruncatedPmf, MAX_TERMS};
use crate::distributions::{DiscreteLaw, TailCertificate};
use crate::error::{Certified, Error, Result};
use crate::special::{binomial_pmf, ln_binomial, ln_falling_factorial};

/// Default absolute tolerance for certified series.
pub const DEFAULT_TOL: f64 = 1e-12;

/// A sample of size `n` from a discrete law.
#[derive(Debug, Clone)]
pub struct KnSpec {
    law: Arc<dyn DiscreteLaw>,
    n: u64,
}

impl KnSpec {
    pub fn new(law: Arc<dyn DiscreteLaw>, n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("sample size n must be at least 1"));
        }
        Ok(KnSpec { law, n })
    }

    pub fn law(&self) -> &dyn DiscreteLaw {
        self.law.as_ref()
    }

    pub fn shared_law(&self) -> Arc<dyn DiscreteLaw> {
        self.law.clone()
    }

    pub fn n(&self) -> u64 {
        self.n
    }
}

// Neumaier-compensated running sum.
#[derive(Default)]
struct Accumulator {
    sum: f64,
    carry: f64,
}

impl Accumulator {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Terms needed so that `exp(ln_weight) * P(X > J)^power <= tol`.
pub(crate) fn series_cutoff(cert: TailCertificate, power: u64, ln_weight: f64, tol: f64) -> Result<u64> {
    if !(tol > 0.0) {
        return Err(Error::domain(format!("tolerance must be positive, got {tol}")));
    }
    match cert.cutoff(power as f64, ln_weight, tol) {
        Some(j) if j <= MAX_TERMS => Ok(j),
        _ => Err(Error::Truncation {
            terms: MAX_TERMS,
            achieved: (ln_weight + power as f64 * cert.ln_bound(MAX_TERMS)).exp(),
        }),
    }
}

/// `exp(ln_weight) * sum_j p(j)^power F(j - lag)^exponent`, certified to `tol`.
fn tie_series(law: &dyn DiscreteLaw, power: u64, exponent: u64, lag: u64, ln_weight: f64, tol: f64) -> Result<Certified> {
    debug_assert!(power >= 1 && lag <= 1);
    let cert = law.tail();
    let last = series_cutoff(cert, power, ln_weight, tol)?;
    let mut acc = Accumulator::default();
    for j in 1..=last {
        let ln_p = law.ln_pmf(j);
        if ln_p == f64::NEG_INFINITY {
            continue;
        }
        let ln_f = if exponent == 0 {
            0.0
        } else {
            let lf = law.ln_cdf(j - lag);
            if lf == f64::NEG_INFINITY {
                continue;
            }
            exponent as f64 * lf
        };
        acc.add((ln_weight + power as f64 * ln_p + ln_f).exp());
    }
    let error = (ln_weight + power as f64 * cert.ln_bound(last)).exp();
    Ok(Certified { value: acc.value(), error })
}

/// `P(K_n = k) = C(n, k) sum_j p(j)^k F(j-1)^{n-k}`.
pub fn kn_pmf(spec: &KnSpec, k: u64, tol: f64) -> Result<Certified> {
    let n = spec.n;
    if k == 0 || k > n {
        return Err(Error::domain(format!("k must lie in [1, {n}], got {k}")));
    }
    tie_series(spec.law(), k, n - k, 1, ln_binomial(n, k), tol)
}

/// Factorial moment `E[(K_n)_l] = (n)_l sum_j p(j)^l F(j)^{n-l}`.
pub fn kn_factorial_moment(spec: &KnSpec, ell: u64, tol: f64) -> Result<Certified> {
    let n = spec.n;
    if ell == 0 || ell > n {
        return Err(Error::domain(format!("moment order must lie in [1, {n}], got {ell}")));
    }
    tie_series(spec.law(), ell, n - ell, 0, ln_falling_factorial(n, ell), tol)
}

/// The quantities the discrete bounds need, computed once per spec.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KnMoments {
    pub n: u64,
    /// `E[K_n]`
    pub e1: f64,
    /// `E[(K_n)_2]` (zero when `n < 2`)
    pub e2: f64,
    /// `E[(K_n)_3]` (zero when `n < 3`)
    pub e3: f64,
    /// `P(K_n = 1)`
    pub p1: f64,
    /// `P(K_n = 2)` (zero when `n < 2`)
    pub p2: f64,
    /// Largest certified truncation error among the five series.
    pub truncation_error: f64,
}

impl KnMoments {
    pub fn compute(spec: &KnSpec, tol: f64) -> Result<Self> {
        let n = spec.n;
        let moment = |l: u64| if l <= n { kn_factorial_moment(spec, l, tol) } else { Ok(Certified::exact(0.0)) };
        let prob = |k: u64| if k <= n { kn_pmf(spec, k, tol) } else { Ok(Certified::exact(0.0)) };
        let parts = [moment(1)?, moment(2)?, moment(3)?, prob(1)?, prob(2)?];
        let truncation_error = parts.iter().map(|c| c.error).fold(0.0, f64::max);
        Ok(KnMoments {
            n,
            e1: parts[0].value,
            e2: parts[1].value,
            e3: parts[2].value,
            p1: parts[3].value,
            p2: parts[4].value,
            truncation_error,
        })
    }

    /// `E[K_n^2] = E[(K_n)_2] + E[K_n]`.
    pub fn second_moment(&self) -> f64 {
        self.e2 + self.e1
    }

    /// `Var(K_n) = E[(K_n)_2] - E[K_n](E[K_n] - 1)`.
    pub fn variance(&self) -> f64 {
        self.e2 - self.e1 * (self.e1 - 1.0)
    }
}

/// Full law of `K_n` on `{1, ..., k_max}` with the unaccounted mass (series
/// truncation plus any omitted `k > k_max`) certified below `tol`.
pub fn kn_full_pmf(spec: &KnSpec, tol: f64) -> Result<TruncatedPmf> {
    if !(tol > 0.0) {
        return Err(Error::domain(format!("tolerance must be positive, got {tol}")));
    }
    let n = spec.n;
    let per_term = tol / (4.0 * n.min(1_000_000) as f64);
    let mut probs = Vec::new();
    let mut acc = Accumulator::default();
    for k in 1..=n {
        let c = kn_pmf(spec, k, per_term)?;
        probs.push(c.value);
        acc.add(c.value);
        // Partial sums are lower bounds, so 1 - sum bounds all missing mass.
        if k < n && 1.0 - acc.value() <= 0.5 * tol {
            break;
        }
        if probs.len() as u64 >= MAX_TERMS {
            return Err(Error::Truncation { terms: probs.len() as u64, achieved: 1.0 - acc.value() });
        }
    }
    let rounding = 4.0 * f64::EPSILON * probs.len() as f64;
    TruncatedPmf::new(1, probs, (1.0 - acc.value()).max(0.0) + rounding)
}

/// `P(K_n* = k) = k P(K_n = k) / E[K_n]`, the size-biased law.
pub fn kn_star_pmf(spec: &KnSpec, k: u64, tol: f64) -> Result<Certified> {
    let p = kn_pmf(spec, k, tol)?;
    let e = kn_factorial_moment(spec, 1, tol)?;
    let value = k as f64 * p.value / e.value;
    // both partial sums are lower bounds; first-order error propagation
    let error = k as f64 * (p.error / e.value + p.value * e.error / (e.value * e.value));
    Ok(Certified { value, error })
}

/// Full size-biased law `K_n*` on `{1, ..., n}`.
pub fn kn_star_full_pmf(spec: &KnSpec, tol: f64) -> Result<TruncatedPmf> {
    let n = spec.n;
    if n > 100_000 {
        return Err(Error::domain("size-biased full pmf is limited to n <= 100000"));
    }
    let per_term = tol / (4.0 * n as f64);
    let e = kn_factorial_moment(spec, 1, per_term)?;
    let mut probs = Vec::with_capacity(n as usize);
    let mut err = 0.0;
    for k in 1..=n {
        let p = kn_pmf(spec, k, per_term)?;
        probs.push(k as f64 * p.value / e.value);
        err += k as f64 * (p.error / e.value + p.value * e.error / (e.value * e.value));
    }
    let total: f64 = probs.iter().sum();
    let rounding = 4.0 * f64::EPSILON * n as f64;
    TruncatedPmf::new(1, probs, (1.0 - total).abs().max(2.0 * err) + rounding)
}

/// Law of the value `M` of the maximum under the size-biased construction:
/// `P(M = m) ∝ p(m) F(m)^{n-1}`.
#[derive(Debug, Clone)]
pub struct ArgmaxLaw {
    base: Arc<dyn DiscreteLaw>,
    n: u64,
    ln_norm: f64,
    norm_rel_error: f64,
    cumulative: Vec<f64>,
}

const ARGMAX_TABLE_CAP: u64 = 2_000_000;

impl ArgmaxLaw {
    fn ln_weight(&self, m: u64) -> f64 {
        let ln_p = self.base.ln_pmf(m);
        if self.n == 1 {
            return ln_p;
        }
        ln_p + (self.n - 1) as f64 * self.base.ln_cdf(m)
    }

    /// `sum_j p(j) F(j)^{n-1} = E[K_n] / n`.
    pub fn normaliser(&self) -> f64 {
        self.ln_norm.exp()
    }

    /// Relative error bound of [`ArgmaxLaw::normaliser`].
    pub fn normaliser_rel_error(&self) -> f64 {
        self.norm_rel_error
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn base(&self) -> &dyn DiscreteLaw {
        self.base.as_ref()
    }
}

impl DiscreteLaw for ArgmaxLaw {
    fn pmf(&self, m: u64) -> f64 {
        if m == 0 {
            return 0.0;
        }
        self.ln_pmf(m).exp()
    }

    fn ln_pmf(&self, m: u64) -> f64 {
        if m == 0 {
            return f64::NEG_INFINITY;
        }
        self.ln_weight(m) - self.ln_norm
    }

    fn cdf(&self, m: u64) -> f64 {
        let len = self.cumulative.len() as u64;
        if m < len {
            return self.cumulative[m as usize];
        }
        let mut acc = Accumulator::default();
        acc.add(self.cumulative[len as usize - 1]);
        for j in len..=m {
            acc.add(self.pmf(j));
        }
        acc.value().min(1.0)
    }

    fn tail(&self) -> TailCertificate {
        match self.base.tail() {
            TailCertificate::Finite { last } => TailCertificate::Finite { last },
            TailCertificate::Geometric { scale, ratio } => TailCertificate::Geometric {
                scale: scale / self.normaliser() * (1.0 + self.norm_rel_error),
                ratio,
            },
        }
    }
}

/// Build the law of `M`.
pub fn m_law(spec: &KnSpec) -> Result<ArgmaxLaw> {
    let law = spec.law();
    let exponent = spec.n - 1;
    // First pass for the magnitude, second pass to a relative tolerance.
    let rough = tie_series(law, 1, exponent, 0, 0.0, 1e-12)?;
    let norm = tie_series(law, 1, exponent, 0, 0.0, (rough.value * 1e-15).max(1e-300))?;
    if !(norm.value > 0.0) {
        return Err(Error::degenerate("normaliser of the law of M vanished"));
    }
    let mut out = ArgmaxLaw {
        base: spec.law.clone(),
        n: spec.n,
        ln_norm: norm.value.ln(),
        norm_rel_error: norm.error / norm.value,
        cumulative: vec![0.0],
    };
    let cert = out.tail();
    let table_end = match cert {
        TailCertificate::Finite { last } => last,
        _ => cert.cutoff(1.0, 0.0, 1e-17).unwrap_or(ARGMAX_TABLE_CAP).min(ARGMAX_TABLE_CAP),
    };
    let mut acc = Accumulator::default();
    let mut cumulative = Vec::with_capacity(table_end as usize + 1);
    cumulative.push(0.0);
    for m in 1..=table_end {
        acc.add(out.pmf(m));
        cumulative.push(acc.value().min(1.0));
    }
    out.cumulative = cumulative;
    Ok(out)
}

/// `q(m) = p(m) / F(m)`.
pub fn q_of_m(law: &dyn DiscreteLaw, m: u64) -> Result<f64> {
    let f = law.cdf(m);
    if !(f > 0.0) {
        return Err(Error::domain(format!("q(m) undefined: F({m}) = 0")));
    }
    Ok((law.ln_pmf(m) - law.ln_cdf(m)).exp().min(1.0))
}

/// `E[q(M)^j]` for `j` in `{1, 2}`, summed directly over the law of `M`.
pub fn q_moment(spec: &KnSpec, j: u32, tol: f64) -> Result<Certified> {
    let n = spec.n;
    match j {
        1 if n < 2 => return Err(Error::domain("E[q(M)] requires n >= 2")),
        2 if n < 3 => return Err(Error::domain("E[q(M)^2] requires n >= 3")),
        1 | 2 => {}
        _ => return Err(Error::domain(format!("q moment order must be 1 or 2, got {j}"))),
    }
    let m_law = m_law(spec)?;
    q_moment_with(&m_law, j, tol)
}

pub(crate) fn q_moment_with(m_law: &ArgmaxLaw, j: u32, tol: f64) -> Result<Certified> {
    let base = m_law.base();
    let cert = m_law.tail();
    let last = series_cutoff(cert, 1, 0.0, tol)?;
    let mut acc = Accumulator::default();
    for m in 1..=last {
        let ln_pm = m_law.ln_pmf(m);
        if ln_pm == f64::NEG_INFINITY {
            continue;
        }
        let ln_q = base.ln_pmf(m) - base.ln_cdf(m);
        acc.add((ln_pm + j as f64 * ln_q).exp());
    }
    let value = acc.value();
    let error = cert.bound(last) + value * m_law.normaliser_rel_error();
    Ok(Certified { value, error })
}

/// Mixture `sum_m P(M = m) Bin(n - 1, q(m))` evaluated at `k - 1`; equals
/// `P(K_n* = k)`.
pub fn mixed_binomial_star_pmf(spec: &KnSpec, k: u64, tol: f64) -> Result<Certified> {
    let n = spec.n;
    if k == 0 || k > n {
        return Err(Error::domain(format!("k must lie in [1, {n}], got {k}")));
    }
    let m_law = m_law(spec)?;
    let base = spec.law();
    let cert = m_law.tail();
    let last = series_cutoff(cert, 1, 0.0, tol)?;
    let mut acc = Accumulator::default();
    for m in 1..=last {
        let pm = m_law.pmf(m);
        if pm == 0.0 {
            continue;
        }
        acc.add(pm * binomial_pmf(n - 1, q_of_m(base, m)?, k - 1));
    }
    let value = acc.value();
    Ok(Certified { value, error: cert.bound(last) + value * m_law.normaliser_rel_error() })
}
