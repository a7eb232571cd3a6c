//! Stein's method for the logarithmic law `L(alpha)`.
//!
//! For a test function `h` with `E h(L) = 0` the Stein equation
//!
//! ```text
//! h(k) = k f(k-1) - alpha k f(k),   k >= 1
//! ```
//!
//! is solved by `f_h(k) = (1/alpha) sum_{j>=1} h(j+k) alpha^j / (j+k)`, and
//! `|f_h(k)| <= -ln(1-alpha)/alpha` uniformly. The series at `k = 0` equals
//! `-ln(1-alpha)/alpha * E h(L)`, which vanishes.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::approximants::{log_pmf, MAX_TERMS};
use crate::error::{Error, Result};

/// `h(k) = 1{k in E} - P(L in E)` for `E` finite or the complement of a finite set.
#[derive(Debug, Clone, PartialEq)]
pub struct SteinTestFn {
    alpha: f64,
    set: BTreeSet<u64>,
    complement: bool,
    prob: f64,
}

impl SteinTestFn {
    pub fn new<I: IntoIterator<Item = u64>>(alpha: f64, set: I, complement: bool) -> Result<Self> {
        check_alpha(alpha)?;
        let set: BTreeSet<u64> = set.into_iter().collect();
        let in_set: f64 = set.iter().map(|&k| log_pmf(alpha, k)).sum::<Result<f64>>()?;
        let prob = if complement { 1.0 - in_set } else { in_set };
        Ok(SteinTestFn { alpha, set, complement, prob })
    }

    /// `E` is every non-negative integer.
    pub fn everything(alpha: f64) -> Result<Self> {
        Self::new(alpha, [], true)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn contains(&self, k: u64) -> bool {
        self.set.contains(&k) != self.complement
    }

    /// `P(L in E)`.
    pub fn target_prob(&self) -> f64 {
        self.prob
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::domain(format!("alpha must lie in (0,1), got {alpha}")));
    }
    Ok(())
}

/// `h(k)`.
pub fn stein_h(t: &SteinTestFn, k: u64) -> f64 {
    let ind = if t.contains(k) { 1.0 } else { 0.0 };
    ind - t.prob
}

/// `f_h(k)` summed until the remainder `alpha^J / ((1-alpha)(k+J+1))` is at most `tol`.
pub fn stein_solution(t: &SteinTestFn, k: u64, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::domain(format!("tolerance must be positive, got {tol}")));
    }
    let alpha = t.alpha;
    let ln_a = alpha.ln();
    let ln_1ma = (-alpha).ln_1p();
    let remainder = |j: u64| (j as f64 * ln_a - ln_1ma - ((k + j + 1) as f64).ln()).exp();
    let mut sum = 0.0;
    let mut power = 1.0;
    let mut j = 0u64;
    loop {
        j += 1;
        power *= alpha;
        sum += stein_h(t, j + k) * power / (j + k) as f64;
        let r = remainder(j);
        if r <= tol {
            break;
        }
        if j >= MAX_TERMS {
            return Err(Error::Truncation { terms: j, achieved: r });
        }
        if power < f64::MIN_POSITIVE {
            // alpha^j underflowed; the remainder bound is below any usable tol
            break;
        }
    }
    Ok(sum / alpha)
}

/// `k f_h(k-1) - alpha k f_h(k) - h(k)`, which vanishes for `k >= 1`.
pub fn stein_residual(t: &SteinTestFn, k: u64, tol: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::domain("the Stein equation is indexed by k >= 1"));
    }
    let prev = stein_solution(t, k - 1, tol)?;
    let here = stein_solution(t, k, tol)?;
    let kf = k as f64;
    Ok(kf * prev - t.alpha * kf * here - stein_h(t, k))
}

/// Uniform bound `-ln(1-alpha)/alpha` on `|f_h|`.
pub fn stein_bound_const(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(-(-alpha).ln_1p() / alpha)
}

/// Logarithmic-vs-negative-binomial bound on `d_TV(NB(ell, 1-beta), L(alpha))`:
///
/// ```text
/// -ln(1-alpha) sqrt(beta ell) / (alpha (1-beta)) * ((1-alpha) sqrt(beta ell) + |alpha - beta|)
/// ```
pub fn log_vs_negbin_bound(alpha: f64, beta: f64, ell: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::domain(format!("beta must lie in (0,1), got {beta}")));
    }
    if !(ell > 0.0 && ell.is_finite()) {
        return Err(Error::domain(format!("ell must be positive, got {ell}")));
    }
    let sd = (beta * ell).sqrt();
    let c = stein_bound_const(alpha)?;
    Ok(c * sd / (1.0 - beta) * ((1.0 - alpha) * sd + (alpha - beta).abs()))
}

/// Summary of a Stein check at one `(E, alpha)`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SteinCheck {
    pub max_residual: f64,
    pub max_abs_solution: f64,
    pub characterization: f64,
}

/// Residual over `1..=k_max`, `sup |f_h|` over `0..=k_max`, and
/// `E[L f_h(L-1) - alpha L f_h(L)]` under `L(alpha)`.
pub fn stein_check(t: &SteinTestFn, k_max: u64, tol: f64) -> Result<SteinCheck> {
    let alpha = t.alpha;
    let law = crate::approximants::TruncatedPmf::logarithmic(alpha, tol)?;
    let top = k_max.max(law.k_max());
    let f: Vec<f64> = (0..=top).map(|k| stein_solution(t, k, tol)).collect::<Result<_>>()?;
    let mut max_residual = 0.0f64;
    for k in 1..=k_max {
        let kf = k as f64;
        let r = kf * f[k as usize - 1] - alpha * kf * f[k as usize] - stein_h(t, k);
        max_residual = max_residual.max(r.abs());
    }
    let max_abs_solution = f[..=k_max as usize].iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let characterization = law
        .iter()
        .map(|(k, p)| {
            let kf = k as f64;
            p * (kf * f[k as usize - 1] - alpha * kf * f[k as usize])
        })
        .sum();
    Ok(SteinCheck { max_residual, max_abs_solution, characterization })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::approximants::{log_mean, tv_distance, TruncatedPmf};
    use proptest::prelude::*;

    const TOL: f64 = 1e-13;

    #[test]
    fn h_examples() {
        let all = SteinTestFn::everything(0.5).unwrap();
        let none = SteinTestFn::new(0.5, [], false).unwrap();
        for k in 0..20 {
            assert!(stein_h(&all, k).abs() < 1e-15);
            assert_eq!(stein_h(&none, k), 0.0);
        }
        let one = SteinTestFn::new(0.5, [1], false).unwrap();
        assert!((stein_h(&one, 1) - (1.0 - 0.5 / std::f64::consts::LN_2)).abs() < 1e-15);
        assert!((stein_h(&one, 1) - 0.278_652).abs() < 1e-6);
        assert!((stein_h(&one, 2) + 0.5 / std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn h_is_centred_under_target() {
        for (alpha, set, comp) in [(0.3, vec![1, 4, 9], false), (0.8, vec![0, 2], true), (0.5, vec![0], false)] {
            let t = SteinTestFn::new(alpha, set, comp).unwrap();
            let law = TruncatedPmf::logarithmic(alpha, 1e-15).unwrap();
            let mean: f64 = law.iter().map(|(k, p)| p * stein_h(&t, k)).sum();
            assert!(mean.abs() < 1e-12, "alpha={alpha}");
        }
    }

    #[test]
    fn full_support_gives_zero_solution() {
        let t = SteinTestFn::everything(0.4).unwrap();
        for k in 0..30 {
            assert!(stein_solution(&t, k, TOL).unwrap().abs() < 1e-14);
            if k > 0 {
                assert!(stein_residual(&t, k, TOL).unwrap().abs() < 1e-13);
            }
        }
    }

    #[test]
    fn solution_at_zero_vanishes() {
        for (alpha, set) in [(0.5, vec![1]), (0.9, vec![2, 3, 7]), (0.1, vec![1, 2])] {
            let t = SteinTestFn::new(alpha, set, false).unwrap();
            assert!(stein_solution(&t, 0, TOL).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn matches_forward_recursion() {
        // f(0) = 0, f(k) = (k f(k-1) - h(k)) / (alpha k)
        for (alpha, set) in [(0.5, vec![1]), (0.7, vec![2, 5]), (0.3, vec![1, 3])] {
            let t = SteinTestFn::new(alpha, set, false).unwrap();
            let mut f = 0.0;
            for k in 1..=8u64 {
                let kf = k as f64;
                f = (kf * f - stein_h(&t, k)) / (alpha * kf);
                let direct = stein_solution(&t, k, TOL).unwrap();
                // forward recursion amplifies rounding by 1/alpha per step
                assert!((f - direct).abs() < 1e-9, "alpha={alpha} k={k}: {f} vs {direct}");
            }
        }
    }

    #[test]
    fn residual_examples() {
        let t = SteinTestFn::new(0.3, [1], false).unwrap();
        for k in 1..=50 {
            assert!(stein_residual(&t, k, TOL).unwrap().abs() < 1e-10);
        }
        let t = SteinTestFn::new(0.6, [0], false).unwrap();
        assert!(stein_residual(&t, 7, TOL).unwrap().abs() < 1e-10);
        assert!(stein_residual(&t, 0, TOL).is_err());
    }

    #[test]
    fn bound_const_examples() {
        assert!((stein_bound_const(0.5).unwrap() - 2.0 * std::f64::consts::LN_2).abs() < 1e-15);
        assert!((stein_bound_const(0.9).unwrap() - 10f64.ln() / 0.9).abs() < 1e-14);
        assert!((stein_bound_const(0.9).unwrap() - 2.558_428).abs() < 1e-6);
        let mut prev = f64::INFINITY;
        for e in 1..12 {
            let c = stein_bound_const(10f64.powi(-e)).unwrap();
            assert!(c < prev && c > 1.0);
            prev = c;
        }
        assert!(prev - 1.0 < 1e-10);
        assert!(stein_bound_const(1.0).is_err());
    }

    #[test]
    fn log_negbin_examples() {
        assert!((log_vs_negbin_bound(0.5, 0.5, 1.0).unwrap() - std::f64::consts::LN_2).abs() < 1e-15);
        assert!(log_vs_negbin_bound(0.5, 0.5, 1e-12).unwrap() < 1e-10);
        for &a in &[0.1, 0.5, 0.9] {
            for &l in &[0.5, 1.0, 2.0, 5.0] {
                let want = -(1.0f64 - a).ln() * l;
                assert!((log_vs_negbin_bound(a, a, l).unwrap() - want).abs() <= 4.0 * f64::EPSILON * want);
            }
        }
        let bound = log_vs_negbin_bound(0.5, 0.4, 2.0).unwrap();
        let nb = TruncatedPmf::negative_binomial(2.0, 0.4, 1e-12).unwrap();
        let l = TruncatedPmf::logarithmic(0.5, 1e-12).unwrap();
        assert!(bound >= tv_distance(&nb, &l).hi);
        assert!(log_vs_negbin_bound(0.5, 0.4, 0.0).is_err());
    }

    #[test]
    fn size_biased_log_is_thinning_invariant() {
        // L* - 1 equals I_alpha L* in law
        for &alpha in &[0.2, 0.5, 0.85] {
            let law = TruncatedPmf::logarithmic(alpha, 1e-15).unwrap();
            let mean = log_mean(alpha).unwrap();
            let star = |k: u64| k as f64 * law.get(k) / mean;
            for k in 0..60u64 {
                let lhs = star(k + 1);
                let rhs = if k == 0 { 1.0 - alpha } else { 0.0 } + alpha * star(k);
                assert!((lhs - rhs).abs() < 1e-12, "alpha={alpha} k={k}");
            }
        }
    }

    fn test_fn() -> impl Strategy<Value = SteinTestFn> {
        (0.02f64..0.95, prop::collection::btree_set(0u64..40, 0..6), any::<bool>())
            .prop_map(|(a, s, c)| SteinTestFn::new(a, s, c).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]
        #[test]
        fn stein_invariants(t in test_fn()) {
            let check = stein_check(&t, 200, TOL).unwrap();
            prop_assert!(check.max_residual <= 1e-10, "residual {}", check.max_residual);
            prop_assert!(check.max_abs_solution <= stein_bound_const(t.alpha()).unwrap() + 1e-12);
            prop_assert!(check.characterization.abs() <= 1e-9);
        }
    }
}
