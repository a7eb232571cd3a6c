//! Dominance sweeps: every bound against the certified exact total-variation
//! distance, plus Monte Carlo cross-checks.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::approximants::{tv_distance, TruncatedPmf};
use crate::bounds::{
    gumbel_spec, mixed_binomial_pmf, near_order_mixture_pmf, thm1a_bound_with, thm1b_from_moments, thm2_from_moments,
    thm3_bound, thm4_bound, uniform_spec, MixedBinomialSpec, NearOrderSpec,
};
use crate::distributions::Geometric;
use crate::error::Result;
use crate::maxima::{kn_full_pmf, KnMoments, KnSpec};
use crate::montecarlo::{empirical_tv, simulate_kn, RngStream};

/// Success probabilities of the geometric sweep.
pub const GEOMETRIC_P: [f64; 6] = [0.05, 0.1, 0.2, 0.3, 0.4, 0.5];
/// Sample sizes of the geometric sweep.
pub const GEOMETRIC_N: [u64; 4] = [5, 10, 20, 50];

/// Knobs for [`run_all`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub tol: f64,
    pub tv_tol: f64,
    pub mc_samples: u64,
    pub seed: u64,
    pub mixture_draws: u64,
    /// Multiplies every bound before comparison; anything below 1 is a negative control.
    pub fault_scale: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            tol: 1e-12,
            tv_tol: 1e-10,
            mc_samples: 100_000,
            seed: crate::montecarlo::DEFAULT_SEED,
            mixture_draws: 60,
            fault_scale: 1.0,
        }
    }
}

/// One comparison of a bound with a distance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyRow {
    pub check: String,
    pub point: String,
    pub bound: f64,
    /// Certified upper end of the exact distance, or the empirical estimate.
    pub distance: f64,
    /// Monte Carlo radius (zero for exact rows).
    pub radius: f64,
    pub pass: bool,
}

impl VerifyRow {
    fn exact(check: &str, point: String, bound: f64, tv_hi: f64) -> Self {
        VerifyRow { check: check.into(), point, bound, distance: tv_hi, radius: 0.0, pass: bound >= tv_hi }
    }
}

fn geometric_spec(p: f64, n: u64) -> Result<KnSpec> {
    KnSpec::new(Arc::new(Geometric::new(p)?), n)
}

/// Theorem 1(a), 1(b) and 2 on the geometric grid.
pub fn verify_discrete(opts: &VerifyOptions) -> Result<Vec<VerifyRow>> {
    let grid: Vec<(f64, u64)> = GEOMETRIC_P.iter().flat_map(|&p| GEOMETRIC_N.iter().map(move |&n| (p, n))).collect();
    let rows: Vec<Vec<VerifyRow>> = grid
        .par_iter()
        .map(|&(p, n)| -> Result<Vec<VerifyRow>> {
            let spec = geometric_spec(p, n)?;
            let m = KnMoments::compute(&spec, opts.tol)?;
            let kn = kn_full_pmf(&spec, opts.tv_tol)?;
            let point = format!("p={p} n={n}");
            let mut out = Vec::new();
            let a = thm1a_bound_with(&spec, &m, opts.tol)?;
            let la = TruncatedPmf::logarithmic(a.params["alpha"], opts.tv_tol)?;
            out.push(VerifyRow::exact("thm1a", point.clone(), a.bound * opts.fault_scale, tv_distance(&kn, &la).hi));
            if n >= 4 {
                let b = thm1b_from_moments(&m)?;
                let lb = TruncatedPmf::logarithmic(b.params["beta"], opts.tv_tol)?;
                out.push(VerifyRow::exact("thm1b", point.clone(), b.bound * opts.fault_scale, tv_distance(&kn, &lb).hi));
            }
            if n >= 3 {
                let c = thm2_from_moments(&m)?;
                let pois = TruncatedPmf::poisson(c.params["lambda"], opts.tv_tol)?;
                out.push(VerifyRow::exact("thm2", point, c.bound * opts.fault_scale, tv_distance(&kn, &pois).hi));
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(rows.into_iter().flatten().collect())
}

/// Theorem 4 on random two-point mixing laws with `n <= 10`.
pub fn verify_mixed_binomial(opts: &VerifyOptions) -> Result<Vec<VerifyRow>> {
    let mut rng = RngStream::new(opts.seed, u64::MAX);
    let mut rows = Vec::new();
    while (rows.len() as u64) < opts.mixture_draws {
        let n = 2 + (rng.uniform() * 9.0) as u64;
        let ell = 1 + (rng.uniform() * (n - 1) as f64) as u64;
        let (q1, q2, w) = (rng.uniform(), rng.uniform(), rng.uniform());
        let atoms = [(q1, w), (q2, 1.0 - w)];
        let spec = MixedBinomialSpec::from_atoms(n, ell, &atoms)?;
        let report = thm4_bound(&spec)?;
        let pmf = mixed_binomial_pmf(n - ell, &atoms)?;
        let nb = TruncatedPmf::negative_binomial(ell as f64, report.params["beta"], opts.tv_tol)?;
        let point = format!("n={n} ell={ell} q=({q1:.4},{q2:.4}) w={w:.4}");
        rows.push(VerifyRow::exact("thm4", point, report.bound * opts.fault_scale, tv_distance(&pmf, &nb).hi));
    }
    Ok(rows)
}

fn near_order_row(spec: &NearOrderSpec, label: &str, opts: &VerifyOptions) -> Result<VerifyRow> {
    let report = thm3_bound(spec, 1e-10)?;
    let pmf = near_order_mixture_pmf(spec, 1e-10)?;
    let nb = TruncatedPmf::negative_binomial(spec.ell() as f64, report.params["beta"], opts.tv_tol)?;
    let point = format!("{label} n={} ell={} a={}", spec.n(), spec.ell(), spec.a());
    Ok(VerifyRow::exact("thm3", point, report.bound * opts.fault_scale, tv_distance(&pmf, &nb).hi))
}

/// Theorem 3 for Gumbel and uniform samples with `n <= 12`.
pub fn verify_continuous(opts: &VerifyOptions) -> Result<Vec<VerifyRow>> {
    let mut specs = Vec::new();
    for &n in &[4u64, 8, 12] {
        for ell in 1..=2u64 {
            for &a in &[0.05, 0.2, 0.5] {
                specs.push(("gumbel", gumbel_spec(n, ell, a)?));
                specs.push(("uniform(1)", uniform_spec(n, ell, a, 1.0)?));
            }
        }
    }
    specs.par_iter().map(|(label, s)| near_order_row(s, label, opts)).collect()
}

/// Empirical `TV(K_n, L(alpha))` within the Theorem 1(a) bound plus radius.
pub fn verify_montecarlo(opts: &VerifyOptions) -> Result<Vec<VerifyRow>> {
    if opts.mc_samples == 0 {
        return Ok(Vec::new());
    }
    let mut rows = Vec::new();
    for (i, &p) in GEOMETRIC_P.iter().enumerate() {
        for (j, &n) in GEOMETRIC_N.iter().enumerate() {
            let spec = geometric_spec(p, n)?;
            let m = KnMoments::compute(&spec, opts.tol)?;
            let a = thm1a_bound_with(&spec, &m, opts.tol)?;
            let la = TruncatedPmf::logarithmic(a.params["alpha"], opts.tv_tol)?;
            let seed = opts.seed.wrapping_add((i * GEOMETRIC_N.len() + j) as u64);
            let emp = simulate_kn(&spec, opts.mc_samples, seed);
            let (est, radius) = empirical_tv(&emp, &la)?;
            let bound = a.bound * opts.fault_scale;
            rows.push(VerifyRow {
                check: "mc-thm1a".into(),
                point: format!("p={p} n={n}"),
                bound,
                distance: est,
                radius,
                pass: est <= bound + radius,
            });
        }
    }
    Ok(rows)
}

/// All sweeps in a fixed order.
pub fn run_all(opts: &VerifyOptions) -> Result<Vec<VerifyRow>> {
    let mut rows = verify_discrete(opts)?;
    rows.extend(verify_mixed_binomial(opts)?);
    rows.extend(verify_continuous(opts)?);
    rows.extend(verify_montecarlo(opts)?);
    Ok(rows)
}
