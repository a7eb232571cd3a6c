//! Probability laws for the sample values.
//!
//! Discrete laws live on `{1, 2, ...}` and carry a [`TailCertificate`] so that
//! every infinite series over the support can be truncated with a proven
//! remainder. Continuous laws expose a cdf defined on all of the real line
//! (clamped to 0 below the support and 1 above it) together with a quantile.
//!
//! The Gumbel density is `exp(-x - e^{-x})`, the derivative of the cdf
//! `exp(-e^{-x})`. (A sign-flipped exponent `exp(-x + e^{-x})` is not a density.)

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Bound on the upper tail `1 - F(j)` of a discrete law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailCertificate {
    /// All mass lies in `{1, ..., last}`.
    Finite { last: u64 },
    /// `1 - F(j) <= scale * ratio^j` for every `j >= 0`.
    Geometric { scale: f64, ratio: f64 },
}

impl TailCertificate {
    /// Upper bound on `P(X > j)`.
    pub fn bound(&self, j: u64) -> f64 {
        match *self {
            TailCertificate::Finite { last } => {
                if j >= last {
                    0.0
                } else {
                    1.0
                }
            }
            TailCertificate::Geometric { scale, ratio } => {
                (scale.ln() + j as f64 * ratio.ln()).exp().min(1.0)
            }
        }
    }

    /// `ln` of [`TailCertificate::bound`], clamped at 0.
    pub fn ln_bound(&self, j: u64) -> f64 {
        match *self {
            TailCertificate::Finite { last } => {
                if j >= last {
                    f64::NEG_INFINITY
                } else {
                    0.0
                }
            }
            TailCertificate::Geometric { scale, ratio } => {
                (scale.ln() + j as f64 * ratio.ln()).min(0.0)
            }
        }
    }

    /// Smallest `J` such that `power * ln bound(J) + ln_weight <= ln tol`.
    ///
    /// This is the truncation point for series whose remainder after `J` is at
    /// most `weight * P(X > J)^power`. Returns `None` when no finite `J` works.
    pub fn cutoff(&self, power: f64, ln_weight: f64, tol: f64) -> Option<u64> {
        match *self {
            TailCertificate::Finite { last } => Some(last),
            TailCertificate::Geometric { scale, ratio } => {
                if !(ratio > 0.0 && ratio < 1.0) {
                    return None;
                }
                // power * (ln scale + J ln ratio) + ln_weight <= ln tol
                let need = ((tol.ln() - ln_weight) / power - scale.ln()) / ratio.ln();
                if !need.is_finite() {
                    return None;
                }
                Some(need.ceil().max(0.0) as u64)
            }
        }
    }
}

/// A law on the positive integers.
pub trait DiscreteLaw: Send + Sync + fmt::Debug {
    /// `P(X = j)`; zero for `j = 0`.
    fn pmf(&self, j: u64) -> f64;

    /// `P(X <= j)`; `cdf(0) = 0`.
    fn cdf(&self, j: u64) -> f64;

    /// `P(X > j)`.
    fn sf(&self, j: u64) -> f64 {
        (1.0 - self.cdf(j)).max(0.0)
    }

    fn ln_pmf(&self, j: u64) -> f64 {
        self.pmf(j).ln()
    }

    /// `ln F(j)`, accurate when `F(j)` is close to one.
    fn ln_cdf(&self, j: u64) -> f64 {
        let s = self.sf(j);
        if s < 0.5 {
            (-s).ln_1p()
        } else {
            self.cdf(j).ln()
        }
    }

    fn tail(&self) -> TailCertificate;

    /// Smallest `j` with `F(j) >= u`.
    fn quantile(&self, u: f64) -> u64 {
        if u <= 0.0 {
            return 1;
        }
        let mut hi = 1u64;
        while self.cdf(hi) < u {
            if hi > u64::MAX / 4 {
                return hi;
            }
            hi *= 2;
        }
        let mut lo = hi / 2;
        // cdf(lo) < u <= cdf(hi)
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.cdf(mid) >= u {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }
}

/// Geometric law `P(X = j) = p (1-p)^{j-1}`, `j >= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geometric {
    p: f64,
    q: f64,
    ln_p: f64,
    ln_q: f64,
}

impl Geometric {
    pub fn new(p: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::domain(format!("geometric p must lie in (0,1), got {p}")));
        }
        Ok(Self::from_parts(p, 1.0 - p))
    }

    /// Build from the failure probability `q = 1 - p`.
    ///
    /// Use this when `p` is within rounding of one (e.g. `q = mu / n`): passing
    /// `q` directly keeps its full relative precision.
    pub fn with_failure_prob(q: f64) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::domain(format!("geometric failure probability must lie in (0,1), got {q}")));
        }
        Ok(Self::from_parts(1.0 - q, q))
    }

    fn from_parts(p: f64, q: f64) -> Self {
        Geometric { p, q, ln_p: (-q).ln_1p(), ln_q: q.ln() }
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn failure_prob(&self) -> f64 {
        self.q
    }
}

impl DiscreteLaw for Geometric {
    fn pmf(&self, j: u64) -> f64 {
        if j == 0 {
            return 0.0;
        }
        self.ln_pmf(j).exp()
    }

    fn cdf(&self, j: u64) -> f64 {
        -(j as f64 * self.ln_q).exp_m1()
    }

    fn sf(&self, j: u64) -> f64 {
        (j as f64 * self.ln_q).exp()
    }

    fn ln_pmf(&self, j: u64) -> f64 {
        if j == 0 {
            return f64::NEG_INFINITY;
        }
        self.ln_p + (j - 1) as f64 * self.ln_q
    }

    fn ln_cdf(&self, j: u64) -> f64 {
        if j == 0 {
            return f64::NEG_INFINITY;
        }
        (-self.sf(j)).ln_1p()
    }

    fn tail(&self) -> TailCertificate {
        TailCertificate::Geometric { scale: 1.0, ratio: self.q }
    }

    fn quantile(&self, u: f64) -> u64 {
        if u <= 0.0 {
            return 1;
        }
        // F(j) >= u  <=>  j >= ln(1-u) / ln q
        let j = ((-u).ln_1p() / self.ln_q).ceil().max(1.0);
        let mut j = if j.is_finite() { j as u64 } else { u64::MAX / 2 };
        // Guard against rounding at the boundaries of the inversion.
        while j > 1 && self.cdf(j - 1) >= u {
            j -= 1;
        }
        while self.cdf(j) < u && j < u64::MAX / 2 {
            j += 1;
        }
        j
    }
}

/// A finite law on `{1, ..., m}` given by explicit weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Tabulated {
    weights: Vec<f64>,
    // cumulative[j] = F(j), j = 0..=m
    cumulative: Vec<f64>,
    // upper[j] = P(X > j), j = 0..=m, summed from the top for precision
    upper: Vec<f64>,
}

impl Tabulated {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::domain("tabulated law needs at least one weight"));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::domain(format!("tabulated weights must be finite and non-negative, got {w}")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::domain(format!("tabulated weights must sum to 1, got {total}")));
        }
        let m = weights.len();
        let mut cumulative = vec![0.0; m + 1];
        for (j, w) in weights.iter().enumerate() {
            cumulative[j + 1] = cumulative[j] + w;
        }
        let mut upper = vec![0.0; m + 1];
        for j in (0..m).rev() {
            upper[j] = upper[j + 1] + weights[j];
        }
        Ok(Tabulated { weights, cumulative, upper })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn support_size(&self) -> u64 {
        self.weights.len() as u64
    }
}

impl DiscreteLaw for Tabulated {
    fn pmf(&self, j: u64) -> f64 {
        if j == 0 {
            return 0.0;
        }
        self.weights.get(j as usize - 1).copied().unwrap_or(0.0)
    }

    fn cdf(&self, j: u64) -> f64 {
        let m = self.weights.len() as u64;
        if j >= m {
            self.cumulative[m as usize].min(1.0)
        } else {
            self.cumulative[j as usize]
        }
    }

    fn sf(&self, j: u64) -> f64 {
        let m = self.weights.len() as u64;
        if j >= m {
            0.0
        } else {
            self.upper[j as usize]
        }
    }

    fn ln_cdf(&self, j: u64) -> f64 {
        let m = self.weights.len() as u64;
        if j >= m {
            return 0.0;
        }
        let s = self.sf(j);
        if s < 0.5 {
            (-s).ln_1p()
        } else {
            self.cdf(j).ln()
        }
    }

    fn tail(&self) -> TailCertificate {
        TailCertificate::Finite { last: self.weights.len() as u64 }
    }

    fn quantile(&self, u: f64) -> u64 {
        let m = self.weights.len();
        let idx = self.cumulative[1..].partition_point(|&c| c < u);
        // Skip zero-weight atoms that share a cumulative value with their predecessor.
        let mut j = (idx + 1).min(m);
        while j < m && self.weights[j - 1] == 0.0 {
            j += 1;
        }
        j as u64
    }
}

/// An absolutely continuous law on the real line.
pub trait ContinuousLaw: Send + Sync + fmt::Debug {
    fn pdf(&self, x: f64) -> f64;

    /// Distribution function, extended by 0 below and 1 above the support.
    fn cdf(&self, x: f64) -> f64;

    /// Inverse of the cdf on `(0, 1)`.
    fn quantile(&self, u: f64) -> f64;

    /// `(lower, upper)` end points; infinite for unbounded supports.
    fn support(&self) -> (f64, f64);
}

/// Standard Gumbel law, `F(x) = exp(-e^{-x})`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Gumbel;

impl Gumbel {
    pub const MEAN: f64 = 0.577_215_664_901_532_9;
}

impl ContinuousLaw for Gumbel {
    fn pdf(&self, x: f64) -> f64 {
        (-x - (-x).exp()).exp()
    }

    fn cdf(&self, x: f64) -> f64 {
        (-(-x).exp()).exp()
    }

    fn quantile(&self, u: f64) -> f64 {
        -(-u.ln()).ln()
    }

    fn support(&self) -> (f64, f64) {
        (f64::NEG_INFINITY, f64::INFINITY)
    }
}

/// Uniform law on `(0, b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Uniform {
    b: f64,
}

impl Uniform {
    pub fn new(b: f64) -> Result<Self> {
        if !(b > 0.0 && b.is_finite()) {
            return Err(Error::domain(format!("uniform upper end b must be positive, got {b}")));
        }
        Ok(Uniform { b })
    }

    pub fn b(&self) -> f64 {
        self.b
    }
}

impl ContinuousLaw for Uniform {
    fn pdf(&self, x: f64) -> f64 {
        if x > 0.0 && x < self.b {
            1.0 / self.b
        } else {
            0.0
        }
    }

    fn cdf(&self, x: f64) -> f64 {
        (x / self.b).clamp(0.0, 1.0)
    }

    fn quantile(&self, u: f64) -> f64 {
        u * self.b
    }

    fn support(&self) -> (f64, f64) {
        (0.0, self.b)
    }
}

/// JSON descriptor for a law, e.g. `{"kind":"geometric","p":0.2}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum LawDescriptor {
    Geometric { p: f64 },
    Tabulated { weights: Vec<f64> },
    Gumbel,
    Uniform { b: f64 },
}

/// A constructed law, either discrete or continuous.
#[derive(Debug, Clone)]
pub enum Law {
    Discrete(Arc<dyn DiscreteLaw>),
    Continuous(Arc<dyn ContinuousLaw>),
}

impl LawDescriptor {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::domain(format!("invalid law descriptor: {e}")))
    }

    pub fn build(&self) -> Result<Law> {
        Ok(match self {
            LawDescriptor::Geometric { p } => Law::Discrete(Arc::new(Geometric::new(*p)?)),
            LawDescriptor::Tabulated { weights } => Law::Discrete(Arc::new(Tabulated::new(weights.clone())?)),
            LawDescriptor::Gumbel => Law::Continuous(Arc::new(Gumbel)),
            LawDescriptor::Uniform { b } => Law::Continuous(Arc::new(Uniform::new(*b)?)),
        })
    }

    pub fn build_discrete(&self) -> Result<Arc<dyn DiscreteLaw>> {
        match self.build()? {
            Law::Discrete(law) => Ok(law),
            Law::Continuous(_) => Err(Error::domain("expected a discrete law (geometric or tabulated)")),
        }
    }

    pub fn build_continuous(&self) -> Result<Arc<dyn ContinuousLaw>> {
        match self.build()? {
            Law::Continuous(law) => Ok(law),
            Law::Discrete(_) => Err(Error::domain("expected a continuous law (gumbel or uniform)")),
        }
    }
}

pub fn make_geometric(p: f64) -> Result<Geometric> {
    Geometric::new(p)
}

pub fn make_tabulated(weights: &[f64]) -> Result<Tabulated> {
    Tabulated::new(weights.to_vec())
}

pub fn make_gumbel() -> Gumbel {
    Gumbel
}

pub fn make_uniform(b: f64) -> Result<Uniform> {
    Uniform::new(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_values() {
        let g = make_geometric(0.5).unwrap();
        assert_eq!(g.pmf(1), 0.5);
        assert!((g.cdf(3) - 0.875).abs() < 1e-16);
        let g = make_geometric(0.25).unwrap();
        assert!((g.pmf(2) - 0.1875).abs() < 1e-16);
        let total: f64 = (1..400).map(|j| g.pmf(j)).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn geometric_rejects_bad_p() {
        for p in [0.0, 1.0, -0.2, 1.5, f64::NAN] {
            assert!(matches!(make_geometric(p), Err(Error::Domain(_))));
        }
    }

    #[test]
    fn geometric_cdf_is_closed_form() {
        for &p in &[0.05, 0.3, 0.9] {
            let g = make_geometric(p).unwrap();
            for j in 0..60 {
                let want = 1.0 - (1.0 - p).powi(j as i32);
                assert!((g.cdf(j) - want).abs() < 1e-15);
                if j >= 1 {
                    assert!((g.cdf(j) - g.cdf(j - 1) - g.pmf(j)).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn geometric_from_failure_probability_keeps_precision() {
        let g = Geometric::with_failure_prob(9e-7).unwrap();
        assert_eq!(g.sf(1), 9e-7);
        assert!((g.ln_cdf(1) - (-9e-7f64).ln_1p()).abs() < 1e-22);
    }

    #[test]
    fn tabulated_values() {
        let t = make_tabulated(&[0.5, 0.5]).unwrap();
        assert_eq!(t.pmf(2), 0.5);
        assert_eq!(t.cdf(1), 0.5);
        let t = make_tabulated(&[1.0]).unwrap();
        assert_eq!(t.cdf(1), 1.0);
        let t = make_tabulated(&[0.2, 0.3, 0.5]).unwrap();
        assert!((t.cdf(2) - 0.5).abs() < 1e-16);
        assert_eq!(t.cdf(0), 0.0);
        assert_eq!(t.sf(3), 0.0);
        assert_eq!(t.tail(), TailCertificate::Finite { last: 3 });
    }

    #[test]
    fn tabulated_rejects_bad_weights() {
        assert!(make_tabulated(&[]).is_err());
        assert!(make_tabulated(&[0.5, 0.6]).is_err());
        assert!(make_tabulated(&[1.2, -0.2]).is_err());
    }

    #[test]
    fn tabulated_quantile_skips_empty_atoms() {
        let t = make_tabulated(&[0.5, 0.0, 0.5]).unwrap();
        assert_eq!(t.quantile(0.25), 1);
        assert_eq!(t.quantile(0.5), 1);
        assert_eq!(t.quantile(0.75), 3);
        assert_eq!(t.quantile(1.0), 3);
    }

    #[test]
    fn geometric_quantile_inverts_cdf() {
        let g = make_geometric(0.3).unwrap();
        for i in 1..200 {
            let u = i as f64 / 200.0;
            let j = g.quantile(u);
            assert!(g.cdf(j) >= u);
            assert!(j == 1 || g.cdf(j - 1) < u);
        }
    }

    #[test]
    fn default_quantile_search_matches_closed_form() {
        #[derive(Debug)]
        struct Plain(Geometric);
        impl DiscreteLaw for Plain {
            fn pmf(&self, j: u64) -> f64 {
                self.0.pmf(j)
            }
            fn cdf(&self, j: u64) -> f64 {
                self.0.cdf(j)
            }
            fn tail(&self) -> TailCertificate {
                self.0.tail()
            }
        }
        let g = make_geometric(0.07).unwrap();
        let plain = Plain(g);
        for i in 1..100 {
            let u = i as f64 / 100.0;
            assert_eq!(plain.quantile(u), g.quantile(u));
        }
    }

    #[test]
    fn tail_certificate_cutoff() {
        let cert = TailCertificate::Geometric { scale: 1.0, ratio: 0.5 };
        let j = cert.cutoff(1.0, 0.0, 1e-12).unwrap();
        assert!(cert.bound(j) <= 1e-12);
        assert!(cert.bound(j - 1) > 1e-12);
        assert_eq!(TailCertificate::Finite { last: 4 }.cutoff(1.0, 10.0, 1e-12), Some(4));
    }

    #[test]
    fn geometric_tail_covers_mass() {
        // sum_{j<=J} pmf + declared tail bound covers 1.
        for &p in &[0.1, 0.5, 0.9] {
            let g = make_geometric(p).unwrap();
            let cert = g.tail();
            let big_j = cert.cutoff(1.0, 0.0, 1e-13).unwrap();
            let head: f64 = (1..=big_j).map(|j| g.pmf(j)).sum();
            assert!((head + cert.bound(big_j) - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn gumbel_values() {
        let g = make_gumbel();
        assert!((g.cdf(0.0) - (-1.0f64).exp()).abs() < 1e-16);
        assert!((g.cdf(50.0) - 1.0).abs() < 1e-16);
        assert!(g.cdf(-50.0) < 1e-300);
    }

    #[test]
    fn gumbel_mean_is_euler_mascheroni() {
        // Composite Simpson on [-10, 40]; the neglected tails are below 1e-12.
        let g = make_gumbel();
        let (a, b, m) = (-10.0, 40.0, 200_000);
        let h = (b - a) / m as f64;
        let f = |x: f64| x * g.pdf(x);
        let mut s = f(a) + f(b);
        for i in 1..m {
            let x = a + i as f64 * h;
            s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(x);
        }
        let mean = s * h / 3.0;
        assert!((mean - Gumbel::MEAN).abs() < 1e-9, "mean={mean}");
    }

    #[test]
    fn uniform_values() {
        let u = make_uniform(1.0).unwrap();
        assert!((u.cdf(0.3) - 0.3).abs() < 1e-16);
        let u = make_uniform(2.0).unwrap();
        assert_eq!(u.cdf(-1.0), 0.0);
        assert_eq!(u.cdf(3.0), 1.0);
        assert!(make_uniform(0.0).is_err());
        assert!(make_uniform(-1.0).is_err());
    }

    #[test]
    fn continuous_cdf_derivative_matches_pdf() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let laws: Vec<Box<dyn ContinuousLaw>> = vec![Box::new(Gumbel), Box::new(Uniform::new(3.0).unwrap())];
        for law in &laws {
            for _ in 0..100 {
                let u: f64 = rng.random_range(0.01..0.99);
                let x = law.quantile(u);
                let h = 1e-5;
                let deriv = (law.cdf(x + h) - law.cdf(x - h)) / (2.0 * h);
                assert!((deriv - law.pdf(x)).abs() < 1e-6, "{law:?} x={x}");
            }
        }
    }

    #[test]
    fn descriptors_parse() {
        let d = LawDescriptor::from_json(r#"{"kind":"geometric","p":0.2}"#).unwrap();
        assert_eq!(d, LawDescriptor::Geometric { p: 0.2 });
        let d = LawDescriptor::from_json(r#"{"kind":"tabulated","weights":[0.5,0.5]}"#).unwrap();
        assert!(d.build_discrete().is_ok());
        let d = LawDescriptor::from_json(r#"{"kind":"gumbel"}"#).unwrap();
        assert!(d.build_continuous().is_ok());
        assert!(d.build_discrete().is_err());
        let d = LawDescriptor::from_json(r#"{"kind":"uniform","b":2.5}"#).unwrap();
        assert!(matches!(d.build().unwrap(), Law::Continuous(_)));
        assert!(LawDescriptor::from_json(r#"{"kind":"cauchy"}"#).is_err());
        assert!(LawDescriptor::from_json(r#"{"kind":"uniform","b":-1}"#).unwrap().build().is_err());
    }
}
