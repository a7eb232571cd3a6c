//! Negative binomial bounds for mixed binomials and for the number of
//! observations just below an order statistic of a continuous sample.
//!
//! For a continuous law `F` the count `K_n(a, l)` of observations in
//! `(X_{n-l+1:n} - a, X_{n-l+1:n})` is `MixBin(n - l, r_a(X_{n-l+1:n}))` with
//! `r_a(x) = 1 - F(x - a) / F(x)`. Integrals against the order statistic are
//! taken in probability space `u = F(x)`, where its density is the
//! `Beta(n - l + 1, l)` density.

use std::sync::Arc;

use crate::approximants::TruncatedPmf;
use crate::bounds::{check_finite, BoundReport};
use crate::distributions::{ContinuousLaw, Gumbel, Uniform};
use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadConfig};
use crate::special::{beta_reg, binomial_pmf, ln_binomial};

/// `W | Q ~ Bin(n - ell, Q)` summarised by `E[Q]` and `E[Q^2]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixedBinomialSpec {
    n: u64,
    ell: u64,
    eq: f64,
    eq2: f64,
}

impl MixedBinomialSpec {
    pub fn new(n: u64, ell: u64, eq: f64, eq2: f64) -> Result<Self> {
        if ell == 0 || ell > n {
            return Err(Error::domain(format!("ell must lie in [1, n], got ell={ell}, n={n}")));
        }
        if !((0.0..=1.0).contains(&eq) && (0.0..=1.0).contains(&eq2)) {
            return Err(Error::domain(format!("moments of Q must lie in [0,1], got {eq}, {eq2}")));
        }
        let slack = 1e-12;
        if eq2 > eq + slack || eq * eq > eq2 + slack {
            return Err(Error::domain(format!("need E[Q]^2 <= E[Q^2] <= E[Q], got {eq}, {eq2}")));
        }
        Ok(MixedBinomialSpec { n, ell, eq, eq2 })
    }

    /// Moments of a finite mixing law given as `(q, weight)` atoms.
    pub fn from_atoms(n: u64, ell: u64, atoms: &[(f64, f64)]) -> Result<Self> {
        let eq = atoms.iter().map(|(q, w)| q * w).sum();
        let eq2 = atoms.iter().map(|(q, w)| q * q * w).sum();
        Self::new(n, ell, eq, eq2)
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn eq(&self) -> f64 {
        self.eq
    }

    pub fn eq2(&self) -> f64 {
        self.eq2
    }
}

/// Negative binomial approximation of a mixed binomial:
///
/// ```text
/// (1 - (1-beta)^l)/(beta l) * E[W] * (beta + (1-beta)[(n-l-1)E[Q^2]/E[Q] - (n-l-2)E[Q]])
/// ```
///
/// with `E[W] = (n - l) E[Q]` and `beta = E[W] / (E[W] + l)`.
pub fn thm4_bound(spec: &MixedBinomialSpec) -> Result<BoundReport> {
    let MixedBinomialSpec { n, ell, eq, eq2 } = *spec;
    if n - ell < 1 {
        return Err(Error::domain("the negative binomial bound needs n - ell >= 1"));
    }
    if !(eq > 0.0) {
        return Err(Error::degenerate("E[Q] = 0, so W vanishes and beta = 0"));
    }
    let m = (n - ell) as f64;
    let l = ell as f64;
    let ew = m * eq;
    let beta = ew / (ew + l);
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::degenerate(format!("beta = {beta} lies outside (0,1)")));
    }
    // 1 - (1-beta)^l without cancellation for small beta
    let factor = -(l * (-beta).ln_1p()).exp_m1() / (beta * l);
    let bracket = (m - 1.0) * eq2 / eq - (m - 2.0) * eq;
    let value = factor * ew * (beta + (1.0 - beta) * bracket);
    let bound = check_finite("negative binomial bound", value)?;
    Ok(BoundReport::new(bound)
        .param("beta", beta)
        .param("ell", l)
        .param("E[W]", ew)
        .moment("E[Q]", eq)
        .moment("E[Q^2]", eq2))
}

/// `K_n(a, l)` for a sample of size `n` from a continuous law.
#[derive(Debug, Clone)]
pub struct NearOrderSpec {
    law: Arc<dyn ContinuousLaw>,
    n: u64,
    ell: u64,
    a: f64,
}

impl NearOrderSpec {
    pub fn new(law: Arc<dyn ContinuousLaw>, n: u64, ell: u64, a: f64) -> Result<Self> {
        if n == 0 || ell == 0 || ell > n {
            return Err(Error::domain(format!("need 1 <= ell <= n, got ell={ell}, n={n}")));
        }
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::domain(format!("distance a must be positive, got {a}")));
        }
        Ok(NearOrderSpec { law, n, ell, a })
    }

    pub fn law(&self) -> &dyn ContinuousLaw {
        self.law.as_ref()
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    fn ln_coefficient(&self) -> f64 {
        (self.n as f64).ln() + ln_binomial(self.n - 1, self.ell - 1)
    }

    // Beta(n - l + 1, l) density at u.
    fn weight(&self, ln_coef: f64, u: f64) -> f64 {
        let up = (self.n - self.ell) as f64;
        let down = (self.ell - 1) as f64;
        let mut ln_w = ln_coef;
        if up > 0.0 {
            ln_w += up * u.ln();
        }
        if down > 0.0 {
            ln_w += down * (-u).ln_1p();
        }
        ln_w.exp()
    }

    /// `r_a(x) = 1 - F(x - a) / F(x)` at `x = F^{-1}(u)`.
    fn r_at_level(&self, u: f64) -> f64 {
        let x = self.law.quantile(u);
        (1.0 - self.law.cdf(x - self.a) / u).clamp(0.0, 1.0)
    }

    fn breakpoints(&self) -> Vec<f64> {
        let mut cuts = Vec::new();
        let (lo, _) = self.law.support();
        if lo.is_finite() {
            let c = self.law.cdf(lo + self.a);
            if c > 0.0 && c < 1.0 {
                cuts.push(c);
            }
        }
        if self.n > 1 {
            cuts.push((self.n - self.ell) as f64 / (self.n - 1) as f64);
        }
        cuts
    }
}

/// `r_a(x) = 1 - F(x - a) / F(x)`; zero where `F(x) = 0`.
pub fn r_a(law: &dyn ContinuousLaw, a: f64, x: f64) -> f64 {
    let f = law.cdf(x);
    if f <= 0.0 {
        return 0.0;
    }
    (1.0 - law.cdf(x - a) / f).clamp(0.0, 1.0)
}

/// Density of `X_{n-l+1:n}`: `n C(n-1, l-1) (1-F)^{l-1} F^{n-l} f`.
pub fn order_stat_density(spec: &NearOrderSpec, x: f64) -> f64 {
    let f = spec.law.pdf(x);
    if f <= 0.0 {
        return 0.0;
    }
    let u = spec.law.cdf(x);
    let up = (spec.n - spec.ell) as f64;
    let down = (spec.ell - 1) as f64;
    let mut ln_d = spec.ln_coefficient() + f.ln();
    if up > 0.0 {
        ln_d += up * u.ln();
    }
    if down > 0.0 {
        ln_d += down * (1.0 - u).ln();
    }
    ln_d.exp()
}

fn quad_config(tol: f64) -> QuadConfig {
    QuadConfig { abs_tol: tol, ..QuadConfig::default() }
}

/// `M_j = E[r_a(X_{n-l+1:n})^j]` by adaptive quadrature.
pub fn m_j_integral(spec: &NearOrderSpec, j: u32, tol: f64) -> Result<f64> {
    if !(j == 1 || j == 2) {
        return Err(Error::domain(format!("M_j is defined for j in {{1, 2}}, got {j}")));
    }
    let ln_coef = spec.ln_coefficient();
    let q = integrate(
        |u| spec.weight(ln_coef, u) * spec.r_at_level(u).powi(j as i32),
        0.0,
        1.0,
        &spec.breakpoints(),
        quad_config(tol),
    )?;
    Ok(q.value.clamp(0.0, 1.0))
}

fn gumbel_ratio(n: u64, ell: u64, c: f64) -> f64 {
    // E[U^c] for U ~ Beta(n - l + 1, l)
    let base = (n - ell + 1) as f64;
    (0..ell).map(|i| (base + i as f64) / (base + c + i as f64)).product()
}

/// Closed-form `M_j` for the standard Gumbel law.
///
/// With `c = e^a - 1`, `r_a = 1 - U^c` where `U = F(X_{n-l+1:n})`, so
/// `M_1 = 1 - R(c)` and `M_2 = 1 - 2R(c) + R(2c)` for
/// `R(c) = prod_{i<l} (n-l+1+i)/(n-l+1+c+i)`. For `l = 1` these are
/// `(e^a-1)/(n+e^a-1)` and `2(e^a-1)^2/((n+e^a-1)(n+2e^a-2))`.
pub fn gumbel_m_closed(n: u64, ell: u64, a: f64, j: u32) -> Result<f64> {
    if n == 0 || ell == 0 || ell > n {
        return Err(Error::domain(format!("need 1 <= ell <= n, got ell={ell}, n={n}")));
    }
    if !(a >= 0.0 && a.is_finite()) {
        return Err(Error::domain(format!("distance a must be non-negative, got {a}")));
    }
    let c = a.exp_m1();
    if ell == 1 {
        let nf = n as f64;
        return match j {
            1 => Ok(c / (nf + c)),
            2 => Ok(2.0 * c * c / ((nf + c) * (nf + 2.0 * c))),
            _ => Err(Error::domain(format!("j must be 1 or 2, got {j}"))),
        };
    }
    match j {
        1 => Ok(1.0 - gumbel_ratio(n, ell, c)),
        2 => Ok(1.0 - 2.0 * gumbel_ratio(n, ell, c) + gumbel_ratio(n, ell, 2.0 * c)),
        _ => Err(Error::domain(format!("j must be 1 or 2, got {j}"))),
    }
}

fn uniform_checks(n: u64, ell: u64, a: f64, b: f64, j: u32) -> Result<()> {
    if !(j == 1 || j == 2) {
        return Err(Error::domain(format!("j must be 1 or 2, got {j}")));
    }
    if ell == 0 || ell > n || n - ell < j as u64 {
        return Err(Error::domain(format!("need 1 <= ell and n - ell >= {j}, got ell={ell}, n={n}")));
    }
    if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
        return Err(Error::domain(format!("a and b must be positive, got a={a}, b={b}")));
    }
    Ok(())
}

/// Uniform `M_j` in the form `an/(b(n-l))` and `a^2 n(n-1)/(b^2(n-l)(n-l-1))`,
/// which takes `r_a(x) = a/x` on the whole of `(0, b)`.
pub fn uniform_m_closed(n: u64, ell: u64, a: f64, b: f64, j: u32) -> Result<f64> {
    uniform_checks(n, ell, a, b, j)?;
    let (nf, m) = (n as f64, (n - ell) as f64);
    Ok(match j {
        1 => a * nf / (b * m),
        _ => a * a * nf * (nf - 1.0) / (b * b * m * (m - 1.0)),
    })
}

/// Uniform `M_j` with `r_a(x) = 1` for `x < a`:
/// `I_c(n-l+1, l) + uniform_m_closed * (1 - I_c(n-l+1-j, l))`, `c = a/b`.
pub fn uniform_m_exact(n: u64, ell: u64, a: f64, b: f64, j: u32) -> Result<f64> {
    uniform_checks(n, ell, a, b, j)?;
    let c = a / b;
    if c >= 1.0 {
        return Ok(1.0);
    }
    let up = (n - ell + 1) as f64;
    let l = ell as f64;
    let below = beta_reg(up, l, c);
    let above = 1.0 - beta_reg(up - j as f64, l, c);
    Ok(below + uniform_m_closed(n, ell, a, b, j)? * above)
}

fn near_order_report(spec: &NearOrderSpec, m1: f64, m2: f64) -> Result<BoundReport> {
    if !(m1 > 0.0) {
        return Err(Error::degenerate("M_1 = 0, so K_n(a, l) - 1 vanishes"));
    }
    let mixed = MixedBinomialSpec::new(spec.n, spec.ell, m1.min(1.0), m2.clamp(m1 * m1, m1))?;
    let report = thm4_bound(&mixed)?;
    Ok(report.param("n", spec.n as f64).param("a", spec.a).moment("M_1", m1).moment("M_2", m2))
}

/// Negative binomial approximation of `K_n(a, l) - 1`: [`thm4_bound`] with
/// `E[Q] = M_1`, `E[Q^2] = M_2` computed by quadrature.
pub fn thm3_bound(spec: &NearOrderSpec, tol: f64) -> Result<BoundReport> {
    if spec.n - spec.ell < 1 {
        return Err(Error::domain("the near-order bound needs n - ell >= 1"));
    }
    let m1 = m_j_integral(spec, 1, tol)?;
    let m2 = m_j_integral(spec, 2, tol)?;
    near_order_report(spec, m1, m2)
}

/// [`thm3_bound`] from given `M_1`, `M_2`.
pub fn thm3_from_moments(spec: &NearOrderSpec, m1: f64, m2: f64) -> Result<BoundReport> {
    if spec.n - spec.ell < 1 {
        return Err(Error::domain("the near-order bound needs n - ell >= 1"));
    }
    near_order_report(spec, m1, m2)
}

/// Gumbel maximum (`l = 1`) bound in closed form:
/// `(n-1)(e^a-1)^2 / (e^a (n+e^a-1)) * (1 + (n-2)/(n+2e^a-2))`.
pub fn gumbel_eq6_bound(n: u64, a: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::domain(format!("need n >= 2, got {n}")));
    }
    if !(a >= 0.0 && a.is_finite()) {
        return Err(Error::domain(format!("distance a must be non-negative, got {a}")));
    }
    let nf = n as f64;
    let c = a.exp_m1();
    Ok((nf - 1.0) * c * c / (a.exp() * (nf + c)) * (1.0 + (nf - 2.0) / (nf + 2.0 * c)))
}

/// Uniform bound in the closed form `(a/(b l)) (1-(1-beta)^l) (n + l(n+l)/(n-l))`,
/// built from [`uniform_m_closed`].
pub fn uniform_closed_bound(n: u64, ell: u64, a: f64, b: f64) -> Result<f64> {
    uniform_checks(n, ell, a, b, 2)?;
    let (nf, l) = (n as f64, ell as f64);
    let ew = (nf - l) * uniform_m_closed(n, ell, a, b, 1)?;
    let beta = ew / (ew + l);
    if !(beta < 1.0) {
        return Err(Error::degenerate(format!("beta = {beta} lies outside (0,1)")));
    }
    Ok(a / (b * l) * (-(l * (-beta).ln_1p()).exp_m1()) * (nf + l * (nf + l) / (nf - l)))
}

/// Exact pmf of `MixBin(m, Q)` for a finite mixing law of `(q, weight)` atoms.
pub fn mixed_binomial_pmf(m: u64, atoms: &[(f64, f64)]) -> Result<TruncatedPmf> {
    if atoms.iter().any(|(q, w)| !(0.0..=1.0).contains(q) || !(*w >= 0.0)) {
        return Err(Error::domain("mixing atoms need q in [0,1] and non-negative weights"));
    }
    let total: f64 = atoms.iter().map(|(_, w)| w).sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::domain(format!("mixing weights sum to {total}, not 1")));
    }
    let probs = (0..=m).map(|k| atoms.iter().map(|(q, w)| w * binomial_pmf(m, *q, k)).sum()).collect();
    TruncatedPmf::new(0, probs, 4.0 * f64::EPSILON * (m + 1) as f64)
}

/// Law of `K_n(a, l) - 1` on `{0, ..., n - l}`:
/// `P(k) = ∫ Bin(n - l, r_a(x)).pmf(k) f_l(x) dx`.
pub fn near_order_mixture_pmf(spec: &NearOrderSpec, tol: f64) -> Result<TruncatedPmf> {
    let m = spec.n - spec.ell;
    let ln_coef = spec.ln_coefficient();
    let cuts = spec.breakpoints();
    let mut probs = Vec::with_capacity(m as usize + 1);
    let mut err = 0.0;
    for k in 0..=m {
        let q = integrate(
            |u| spec.weight(ln_coef, u) * binomial_pmf(m, spec.r_at_level(u), k),
            0.0,
            1.0,
            &cuts,
            quad_config(tol),
        )?;
        probs.push(q.value.max(0.0));
        err += q.error;
    }
    let total: f64 = probs.iter().sum();
    TruncatedPmf::new(0, probs, (1.0 - total).abs().max(err))
}

/// Shorthand for a Gumbel near-maximum spec.
pub fn gumbel_spec(n: u64, ell: u64, a: f64) -> Result<NearOrderSpec> {
    NearOrderSpec::new(Arc::new(Gumbel), n, ell, a)
}

/// Shorthand for a uniform `(0, b)` near-order spec.
pub fn uniform_spec(n: u64, ell: u64, a: f64, b: f64) -> Result<NearOrderSpec> {
    NearOrderSpec::new(Arc::new(Uniform::new(b)?), n, ell, a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::approximants::{tv_distance, TruncatedPmf};

    const QTOL: f64 = 1e-10;

    #[test]
    fn degenerate_mixing_law() {
        let (n, ell, q) = (10u64, 2u64, 0.1);
        let s = MixedBinomialSpec::new(n, ell, q, q * q).unwrap();
        let r = thm4_bound(&s).unwrap();
        let beta = r.get("beta").unwrap();
        let want = (1.0 - (1.0 - beta).powi(2)) / (2.0 * beta) * 8.0 * q * (beta + (1.0 - beta) * q);
        assert!((r.bound - want).abs() < 1e-15);
        let w = mixed_binomial_pmf(n - ell, &[(q, 1.0)]).unwrap();
        let nb = TruncatedPmf::negative_binomial(ell as f64, beta, 1e-14).unwrap();
        assert!(r.bound >= tv_distance(&w, &nb).hi);
    }

    #[test]
    fn single_trial_bracket() {
        let q = 0.3;
        let s = MixedBinomialSpec::new(4, 3, q, q * q).unwrap();
        let r = thm4_bound(&s).unwrap();
        let beta = q / (q + 3.0);
        let want = (1.0 - (1.0 - beta).powi(3)) / (3.0 * beta) * q * (beta + (1.0 - beta) * q);
        assert!((r.bound - want).abs() < 1e-15);
    }

    #[test]
    fn two_point_mixture_dominated() {
        let atoms = [(0.1, 0.5), (0.2, 0.5)];
        let s = MixedBinomialSpec::from_atoms(8, 1, &atoms).unwrap();
        let r = thm4_bound(&s).unwrap();
        let w = mixed_binomial_pmf(7, &atoms).unwrap();
        let nb = TruncatedPmf::negative_binomial(1.0, r.get("beta").unwrap(), 1e-14).unwrap();
        assert!(r.bound >= 0.0 && r.bound >= tv_distance(&w, &nb).lo);
    }

    #[test]
    fn mixed_spec_validation() {
        assert!(MixedBinomialSpec::new(5, 0, 0.1, 0.01).is_err());
        assert!(MixedBinomialSpec::new(5, 6, 0.1, 0.01).is_err());
        assert!(MixedBinomialSpec::new(5, 1, 0.1, 0.2).is_err());
        assert!(MixedBinomialSpec::new(5, 1, 0.5, 0.1).is_err());
        let zero = MixedBinomialSpec::new(5, 1, 0.0, 0.0).unwrap();
        assert!(matches!(thm4_bound(&zero), Err(Error::Degenerate(_))));
        assert!(matches!(thm4_bound(&MixedBinomialSpec::new(5, 5, 0.1, 0.01).unwrap()), Err(Error::Domain(_))));
    }

    #[test]
    fn density_examples() {
        let s = uniform_spec(2, 1, 0.1, 1.0).unwrap();
        assert!((order_stat_density(&s, 0.5) - 1.0).abs() < 1e-15);
        let g = gumbel_spec(7, 1, 0.3).unwrap();
        let law = Gumbel;
        for &x in &[-1.0, 0.3, 2.5] {
            let max_density = 7.0 * law.cdf(x).powi(6) * law.pdf(x);
            assert!((order_stat_density(&g, x) - max_density).abs() < 1e-14);
        }
        let g = gumbel_spec(7, 7, 0.3).unwrap();
        for &x in &[-1.0, 0.3, 2.5] {
            let min_density = 7.0 * (1.0 - law.cdf(x)).powi(6) * law.pdf(x);
            assert!((order_stat_density(&g, x) - min_density).abs() < 1e-14);
        }
    }

    #[test]
    fn density_integrates_to_one_in_x() {
        for &n in &[5u64, 20, 100] {
            for ell in 1..=3u64 {
                let g = gumbel_spec(n, ell, 0.5).unwrap();
                let q = integrate(|x| order_stat_density(&g, x), -6.0, 45.0, &[], QuadConfig::default()).unwrap();
                assert!((q.value - 1.0).abs() < 1e-9, "gumbel n={n} ell={ell}");
                let u = uniform_spec(n, ell, 0.5, 1.0).unwrap();
                let q = integrate(|x| order_stat_density(&u, x), 0.0, 1.0, &[], QuadConfig::default()).unwrap();
                assert!((q.value - 1.0).abs() < 1e-9, "uniform n={n} ell={ell}");
            }
        }
    }

    #[test]
    fn gumbel_paper_values() {
        let a = 2f64.ln();
        let s = gumbel_spec(10, 1, a).unwrap();
        assert!((gumbel_m_closed(10, 1, a, 1).unwrap() - 1.0 / 11.0).abs() < 1e-15);
        assert!((gumbel_m_closed(10, 1, a, 2).unwrap() - 1.0 / 66.0).abs() < 1e-15);
        assert!((m_j_integral(&s, 1, QTOL).unwrap() - 1.0 / 11.0).abs() < 1e-8);
        assert!((m_j_integral(&s, 2, QTOL).unwrap() - 1.0 / 66.0).abs() < 1e-8);
    }

    #[test]
    fn gumbel_general_ell_matches_product_form_at_ell_one() {
        for &n in &[5u64, 20] {
            for a in [0.1f64, 1.0] {
                let c = a.exp_m1();
                assert!((1.0 - gumbel_ratio(n, 1, c) - gumbel_m_closed(n, 1, a, 1).unwrap()).abs() < 1e-15);
                let m2 = 1.0 - 2.0 * gumbel_ratio(n, 1, c) + gumbel_ratio(n, 1, 2.0 * c);
                assert!((m2 - gumbel_m_closed(n, 1, a, 2).unwrap()).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn closed_forms_vanish_with_a() {
        assert_eq!(gumbel_m_closed(10, 2, 0.0, 1).unwrap(), 0.0);
        assert!(uniform_m_closed(10, 1, 1e-12, 1.0, 1).unwrap() < 1e-10);
        assert!(uniform_m_exact(10, 1, 1e-12, 1.0, 2).unwrap() < 1e-10);
    }

    #[test]
    fn uniform_paper_and_exact_forms() {
        // a = b: the paper form exceeds 1, the exact value is 1
        assert!((uniform_m_closed(10, 1, 1.0, 1.0, 1).unwrap() - 10.0 / 9.0).abs() < 1e-15);
        assert_eq!(uniform_m_exact(10, 1, 1.0, 1.0, 1).unwrap(), 1.0);
        let s = uniform_spec(20, 2, 0.1, 1.0).unwrap();
        for j in 1..=2 {
            let quad = m_j_integral(&s, j, QTOL).unwrap();
            let exact = uniform_m_exact(20, 2, 0.1, 1.0, j).unwrap();
            let paper = uniform_m_closed(20, 2, 0.1, 1.0, j).unwrap();
            assert!((quad - exact).abs() < 1e-10);
            // the clamp region u < a/b carries Beta mass below 1e-15 here
            assert!((quad - paper).abs() < 1e-10);
        }
        assert!(uniform_m_closed(3, 2, 0.1, 1.0, 2).is_err());
    }

    #[test]
    fn jensen_on_grid() {
        for &n in &[5u64, 20, 100] {
            for ell in 1..=3u64 {
                for &a in &[0.1, 0.5, 1.0, 2.0] {
                    for s in [gumbel_spec(n, ell, a).unwrap(), uniform_spec(n, ell, a, 1.0).unwrap()] {
                        let m1 = m_j_integral(&s, 1, QTOL).unwrap();
                        let m2 = m_j_integral(&s, 2, QTOL).unwrap();
                        assert!(m1 * m1 <= m2 + 1e-12 && m2 <= m1 + 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn eq6_examples() {
        assert!((gumbel_eq6_bound(2, 2f64.ln()).unwrap() - 1.0 / 6.0).abs() < 1e-15);
        assert!(gumbel_eq6_bound(20, 1e-6).unwrap() < 1e-9);
        assert!(gumbel_eq6_bound(1, 0.5).is_err());
        assert_eq!(gumbel_eq6_bound(5, 0.0).unwrap(), 0.0);
        assert!(gumbel_eq6_bound(5, -0.1).is_err());
        for &n in &[20u64, 100] {
            let mut prev = 0.0;
            for i in 1..=100 {
                let v = gumbel_eq6_bound(n, i as f64 * 0.01).unwrap();
                assert!(v > prev);
                prev = v;
            }
        }
    }

    #[test]
    fn eq6_matches_generic_pipeline() {
        for &n in &[20u64, 100] {
            for i in 1..=20 {
                let a = 0.05 * i as f64;
                let generic = thm3_bound(&gumbel_spec(n, 1, a).unwrap(), QTOL).unwrap().bound;
                let closed = gumbel_eq6_bound(n, a).unwrap();
                assert!((generic - closed).abs() < 1e-6, "n={n} a={a}: {generic} vs {closed}");
            }
        }
    }

    #[test]
    fn uniform_bound_hand_value() {
        let v = uniform_closed_bound(10, 1, 0.1, 1.0).unwrap();
        assert!((v - 0.05 * (10.0 + 11.0 / 9.0)).abs() < 1e-15);
        let generic = thm3_bound(&uniform_spec(10, 1, 0.1, 1.0).unwrap(), QTOL).unwrap();
        assert!((generic.get("beta").unwrap() - 0.5).abs() < 1e-9);
        assert!((generic.bound - 0.561_111).abs() < 1e-6);
    }

    #[test]
    fn thm3_delegates_to_thm4() {
        let s = gumbel_spec(30, 2, 0.4).unwrap();
        let r3 = thm3_bound(&s, QTOL).unwrap();
        let m1 = r3.moments["M_1"];
        let m2 = r3.moments["M_2"];
        let r4 = thm4_bound(&MixedBinomialSpec::new(30, 2, m1, m2).unwrap()).unwrap();
        assert!((r3.bound - r4.bound).abs() < 1e-12);
    }

    #[test]
    fn mixture_pmf_normalises_and_bound_dominates() {
        let s = uniform_spec(8, 1, 0.05, 1.0).unwrap();
        let w = near_order_mixture_pmf(&s, QTOL).unwrap();
        assert!((w.mass() - 1.0).abs() < 1e-9);
        let r = thm3_bound(&s, QTOL).unwrap();
        let nb = TruncatedPmf::negative_binomial(1.0, r.get("beta").unwrap(), 1e-14).unwrap();
        assert!(r.bound >= tv_distance(&w, &nb).hi);
        let mean: f64 = w.mean();
        assert!((mean - 7.0 * r.moments["M_1"]).abs() < 1e-9);
    }

    #[test]
    fn near_order_validation() {
        assert!(gumbel_spec(5, 0, 0.1).is_err());
        assert!(gumbel_spec(5, 6, 0.1).is_err());
        assert!(gumbel_spec(5, 1, 0.0).is_err());
        assert!(m_j_integral(&gumbel_spec(5, 1, 0.1).unwrap(), 3, QTOL).is_err());
        assert!(thm3_bound(&gumbel_spec(5, 5, 0.1).unwrap(), QTOL).is_err());
        assert!((r_a(&Gumbel, 0.5, 1.0) - (1.0 - Gumbel.cdf(0.5) / Gumbel.cdf(1.0))).abs() < 1e-15);
    }
}
