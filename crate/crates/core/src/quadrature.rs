//! Globally adaptive Gauss–Kronrod (7/15 point) quadrature on finite intervals.
//!
//! The interval with the largest error estimate is bisected until the summed
//! estimate meets `max(abs_tol, rel_tol * |value|)`. Subdivision order is
//! deterministic, so results are bit-for-bit reproducible.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

// Kronrod abscissae and weights; odd indices are the embedded Gauss nodes.
// Digits are kept as published.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Tolerances and subdivision cap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig { abs_tol: 1e-10, rel_tol: 1e-8, max_intervals: 4000 }
    }
}

/// Integral estimate and its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy)]
struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error).then_with(|| other.a.total_cmp(&self.a))
    }
}

fn gauss_kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Piece {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for i in 0..7 {
        let dx = half * XGK[i];
        let pair = f(centre - dx) + f(centre + dx);
        kronrod += WGK[i] * pair;
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }
    Piece { a, b, value: kronrod * half, error: ((kronrod - gauss) * half).abs() }
}

/// `∫_a^b f`, splitting first at the given interior breakpoints.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, breakpoints: &[f64], cfg: QuadConfig) -> Result<Quadrature> {
    if !(a.is_finite() && b.is_finite() && a <= b) {
        return Err(Error::domain(format!("integration limits must be finite with a <= b, got [{a}, {b}]")));
    }
    if a == b {
        return Ok(Quadrature { value: 0.0, error: 0.0, intervals: 0 });
    }
    let mut cuts: Vec<f64> = breakpoints.iter().copied().filter(|x| *x > a && *x < b).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut edges = Vec::with_capacity(cuts.len() + 2);
    edges.push(a);
    edges.extend(cuts);
    edges.push(b);

    let mut heap: BinaryHeap<Piece> = edges.windows(2).map(|w| gauss_kronrod(&f, w[0], w[1])).collect();
    loop {
        let value: f64 = heap.iter().map(|p| p.value).sum();
        let error: f64 = heap.iter().map(|p| p.error).sum();
        if !value.is_finite() {
            return Err(Error::numeric("integrand produced a non-finite value"));
        }
        if error <= cfg.abs_tol.max(cfg.rel_tol * value.abs()) {
            return Ok(Quadrature { value, error, intervals: heap.len() });
        }
        let worst = heap.pop().expect("at least one interval");
        let mid = 0.5 * (worst.a + worst.b);
        if heap.len() + 2 > cfg.max_intervals || mid <= worst.a || mid >= worst.b {
            return Err(Error::Integration { estimate: value, error });
        }
        heap.push(gauss_kronrod(&f, worst.a, mid));
        heap.push(gauss_kronrod(&f, mid, worst.b));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_is_exact_for_polynomials() {
        // the 15-point Kronrod rule integrates degree <= 22 exactly
        for d in 0..=22i32 {
            let q = gauss_kronrod(&|x: f64| x.powi(d), 0.0, 1.0);
            assert!((q.value - 1.0 / (d + 1) as f64).abs() < 1e-15, "degree {d}");
        }
        // the 7-point Gauss rule integrates degree <= 13 exactly
        for d in 0..=13i32 {
            let q = gauss_kronrod(&|x: f64| x.powi(d), -1.0, 1.0);
            assert!(q.error < 1e-14, "degree {d}");
        }
    }

    #[test]
    fn weights_sum_to_interval_length() {
        let k: f64 = WGK[7] + 2.0 * WGK[..7].iter().sum::<f64>();
        let g: f64 = WG[3] + 2.0 * WG[..3].iter().sum::<f64>();
        assert!((k - 2.0).abs() < 1e-15);
        assert!((g - 2.0).abs() < 1e-15);
    }

    #[test]
    fn smooth_and_kinked_integrands() {
        let cfg = QuadConfig::default();
        let q = integrate(f64::exp, 0.0, 1.0, &[], cfg).unwrap();
        assert!((q.value - (1f64.exp() - 1.0)).abs() < 1e-14);
        let q = integrate(|x: f64| (x - 0.3).abs(), 0.0, 1.0, &[0.3], cfg).unwrap();
        assert!((q.value - (0.045 + 0.245)).abs() < 1e-15);
        assert_eq!(q.intervals, 2);
        let q = integrate(|x: f64| (x - 0.3).abs(), 0.0, 1.0, &[], cfg).unwrap();
        assert!((q.value - 0.29).abs() < 1e-9);
        let q = integrate(|x: f64| x.sqrt(), 0.0, 1.0, &[], cfg).unwrap();
        assert!((q.value - 2.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn peaked_beta_density() {
        // n u^{n-1} on [0,1] for large n
        let n = 2000.0;
        let q = integrate(|u: f64| n * u.powf(n - 1.0), 0.0, 1.0, &[], QuadConfig::default()).unwrap();
        assert!((q.value - 1.0).abs() < 1e-8);
    }

    #[test]
    fn failure_reports_estimate() {
        let cfg = QuadConfig { abs_tol: 1e-14, rel_tol: 0.0, max_intervals: 8 };
        match integrate(|x: f64| (1.0 / x).sin(), 1e-6, 1.0, &[], cfg) {
            Err(Error::Integration { error, .. }) => assert!(error > 1e-14),
            other => panic!("unexpected {other:?}"),
        }
        assert!(integrate(|x| x, 1.0, 0.0, &[], QuadConfig::default()).is_err());
        assert_eq!(integrate(|x| x, 2.0, 2.0, &[], QuadConfig::default()).unwrap().value, 0.0);
    }
}
