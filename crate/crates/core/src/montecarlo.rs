//! Seeded simulation of `K_n`, its size-biased version and `K_n(a, l)`.
//!
//! Every sampler draws through the inverse cdf. Parallel runs split the sample
//! into fixed-size chunks, and chunk `c` always uses stream `c` of the seed, so
//! counts do not depend on the number of threads.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::approximants::TruncatedPmf;
use crate::bounds::NearOrderSpec;
use crate::distributions::DiscreteLaw;
use crate::error::{Error, Result};
use crate::maxima::{ArgmaxLaw, KnSpec};

/// Environment variable read by the command-line tool for the default seed.
pub const SEED_ENV: &str = "MAXTIES_SEED";

/// Seed used when neither a flag nor the environment provides one.
pub const DEFAULT_SEED: u64 = 20_240_229;

/// Samples per parallel chunk.
pub const CHUNK: u64 = 16_384;

/// Independent, reproducible random stream `(seed, stream_id)`.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        RngStream { seed, stream_id, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Uniform on the open interval `(0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }
}

/// Outcome counts of a simulation.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct EmpiricalPmf {
    counts: Vec<u64>,
    sample_size: u64,
}

impl EmpiricalPmf {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, k: u64) {
        let k = k as usize;
        if k >= self.counts.len() {
            self.counts.resize(k + 1, 0);
        }
        self.counts[k] += 1;
        self.sample_size += 1;
    }

    pub fn merge(&mut self, other: &EmpiricalPmf) {
        if other.counts.len() > self.counts.len() {
            self.counts.resize(other.counts.len(), 0);
        }
        for (c, o) in self.counts.iter_mut().zip(&other.counts) {
            *c += o;
        }
        self.sample_size += other.sample_size;
    }

    pub fn sample_size(&self) -> u64 {
        self.sample_size
    }

    pub fn count(&self, k: u64) -> u64 {
        self.counts.get(k as usize).copied().unwrap_or(0)
    }

    pub fn freq(&self, k: u64) -> f64 {
        if self.sample_size == 0 {
            return 0.0;
        }
        self.count(k) as f64 / self.sample_size as f64
    }

    /// Largest observed outcome (0 when empty).
    pub fn max_outcome(&self) -> u64 {
        self.counts.iter().rposition(|&c| c > 0).unwrap_or(0) as u64
    }

    pub fn mean(&self) -> f64 {
        let total: f64 = self.counts.iter().enumerate().map(|(k, &c)| k as f64 * c as f64).sum();
        total / self.sample_size as f64
    }

    /// `(outcome, count)` pairs with non-zero count.
    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.counts.iter().enumerate().filter(|(_, &c)| c > 0).map(|(k, &c)| (k as u64, c))
    }
}

/// Number of sample values tied with the maximum of `n` draws.
pub fn sample_kn(spec: &KnSpec, rng: &mut RngStream) -> u64 {
    let law = spec.law();
    let mut max = 0u64;
    let mut ties = 0u64;
    for _ in 0..spec.n() {
        let x = law.quantile(rng.uniform());
        if x > max {
            max = x;
            ties = 1;
        } else if x == max {
            ties += 1;
        }
    }
    ties
}

/// Size-biased `K_n*`: draw `M` from its law, then `n - 1` values conditioned
/// on `X <= M`, and return one plus the number equal to `M`.
pub fn sample_kn_star(spec: &KnSpec, m_law: &ArgmaxLaw, rng: &mut RngStream) -> u64 {
    let law = spec.law();
    let m = m_law.quantile(rng.uniform());
    let f_m = law.cdf(m);
    let mut ties = 1u64;
    for _ in 1..spec.n() {
        if law.quantile(rng.uniform() * f_m) == m {
            ties += 1;
        }
    }
    ties
}

/// Number of observations strictly inside `(X_{n-l+1:n} - a, X_{n-l+1:n})`.
pub fn sample_kn_al(spec: &NearOrderSpec, rng: &mut RngStream) -> u64 {
    let law = spec.law();
    let mut xs: Vec<f64> = (0..spec.n()).map(|_| law.quantile(rng.uniform())).collect();
    let idx = (spec.n() - spec.ell()) as usize;
    let (below, pivot, _) = xs.select_nth_unstable_by(idx, f64::total_cmp);
    let top = *pivot;
    below.iter().filter(|&&x| x > top - spec.a() && x < top).count() as u64
}

/// Run `samples` draws in parallel chunks; chunk `c` uses `RngStream::new(seed, c)`.
pub fn simulate<F>(samples: u64, seed: u64, draw: F) -> EmpiricalPmf
where
    F: Fn(&mut RngStream) -> u64 + Sync,
{
    let chunks = samples.div_ceil(CHUNK);
    let parts: Vec<EmpiricalPmf> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = RngStream::new(seed, c);
            let mut emp = EmpiricalPmf::new();
            let len = CHUNK.min(samples - c * CHUNK);
            for _ in 0..len {
                emp.record(draw(&mut rng));
            }
            emp
        })
        .collect();
    let mut out = EmpiricalPmf::new();
    for p in &parts {
        out.merge(p);
    }
    out
}

pub fn simulate_kn(spec: &KnSpec, samples: u64, seed: u64) -> EmpiricalPmf {
    simulate(samples, seed, |rng| sample_kn(spec, rng))
}

pub fn simulate_kn_star(spec: &KnSpec, samples: u64, seed: u64) -> Result<EmpiricalPmf> {
    let m_law = crate::maxima::m_law(spec)?;
    Ok(simulate(samples, seed, |rng| sample_kn_star(spec, &m_law, rng)))
}

pub fn simulate_kn_al(spec: &NearOrderSpec, samples: u64, seed: u64) -> EmpiricalPmf {
    simulate(samples, seed, |rng| sample_kn_al(spec, rng))
}

/// Confidence level used by [`empirical_tv`] radii.
pub const TV_CONFIDENCE_DELTA: f64 = 1e-3;

/// Half-L1 distance between empirical frequencies and `target`, with a radius
/// `sum_k sqrt(p̂_k / N) + sqrt(ln(2/δ) / (2N)) + tail/2`, δ = 1e-3, that
/// covers the distance between the sampled law and `target`.
///
/// The first term bounds the mean bias `½ sum_k E|p̂_k - p_k| <= ½ sum_k sqrt(p_k/N)`
/// with a factor two of headroom for using `p̂` in place of `p`; the second is
/// the bounded-differences deviation at level δ.
pub fn empirical_tv(emp: &EmpiricalPmf, target: &TruncatedPmf) -> Result<(f64, f64)> {
    let n = emp.sample_size();
    if n == 0 {
        return Err(Error::domain("empirical pmf has no samples"));
    }
    let nf = n as f64;
    let start = target.k_min().min(emp.iter().next().map_or(u64::MAX, |(k, _)| k));
    let end = target.k_max().max(emp.max_outcome());
    let mut half_l1 = 0.0;
    let mut bias = 0.0;
    for k in start..=end {
        let f = emp.freq(k);
        half_l1 += (f - target.get(k)).abs();
        bias += (f / nf).sqrt();
    }
    let deviation = ((2.0 / TV_CONFIDENCE_DELTA).ln() / (2.0 * nf)).sqrt();
    Ok((0.5 * half_l1, bias + deviation + 0.5 * target.tail_mass_bound()))
}

/// Result of a chi-square goodness-of-fit test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GofResult {
    pub statistic: f64,
    pub dof: u64,
    pub p_value: f64,
    pub pass: bool,
}

/// Chi-square test of `emp` against `target`, merging adjacent outcomes until
/// each bin expects at least 5 observations; unlisted target mass joins the last bin.
pub fn chi_square_gof(emp: &EmpiricalPmf, target: &TruncatedPmf, significance: f64) -> Result<GofResult> {
    let n = emp.sample_size();
    if n == 0 {
        return Err(Error::domain("empirical pmf has no samples"));
    }
    let nf = n as f64;
    let mut bins: Vec<(f64, f64)> = Vec::new();
    let (mut exp_acc, mut obs_acc) = (0.0, 0.0);
    let mut listed_obs = 0u64;
    for k in target.k_min()..=target.k_max() {
        exp_acc += nf * target.get(k);
        let c = emp.count(k);
        obs_acc += c as f64;
        listed_obs += c;
        if exp_acc >= 5.0 {
            bins.push((obs_acc, exp_acc));
            exp_acc = 0.0;
            obs_acc = 0.0;
        }
    }
    exp_acc += nf * (1.0 - target.mass()).max(0.0);
    obs_acc += (n - listed_obs) as f64;
    if exp_acc > 0.0 || obs_acc > 0.0 {
        match bins.last_mut() {
            Some(last) if exp_acc < 5.0 => {
                last.0 += obs_acc;
                last.1 += exp_acc;
            }
            _ => bins.push((obs_acc, exp_acc)),
        }
    }
    if bins.len() < 2 {
        return Err(Error::domain("too few bins for a chi-square test"));
    }
    let statistic: f64 = bins.iter().map(|(o, e)| (o - e) * (o - e) / e).sum();
    let dof = bins.len() as u64 - 1;
    let chi = ChiSquared::new(dof as f64).map_err(|e| Error::numeric(e.to_string()))?;
    let p_value = chi.sf(statistic);
    Ok(GofResult { statistic, dof, p_value, pass: p_value >= significance })
}

/// Largest pointwise deviation `|p̂_k - p_k|` in units of `sqrt(p_k (1 - p_k) / N)`
/// over the listed support of `target`.
pub fn max_standard_error(emp: &EmpiricalPmf, target: &TruncatedPmf) -> f64 {
    let nf = emp.sample_size() as f64;
    target
        .iter()
        .filter(|(_, p)| *p > 0.0 && *p < 1.0)
        .map(|(k, p)| (emp.freq(k) - p).abs() / (p * (1.0 - p) / nf).sqrt())
        .fold(0.0, f64::max)
}
