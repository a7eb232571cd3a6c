//! Simulated ties at the maximum, the size-biased construction, and a
//! continuous near-maximum count, each against its exact law.
//!
//! ```bash
//! cargo run --release --example monte_carlo
//! MAXTIES_SEED=7 cargo run --release --example monte_carlo
//! ```

use std::sync::Arc;

use maxties::bounds::{gumbel_spec, near_order_mixture_pmf};
use maxties::distributions::Geometric;
use maxties::maxima::{kn_full_pmf, kn_star_full_pmf, KnSpec};
use maxties::montecarlo::{chi_square_gof, empirical_tv, simulate_kn, simulate_kn_al, simulate_kn_star, DEFAULT_SEED, SEED_ENV};

fn main() -> Result<(), maxties::Error> {
    let seed = std::env::var(SEED_ENV).ok().and_then(|s| s.parse().ok()).unwrap_or(DEFAULT_SEED);
    let samples = 500_000;
    let spec = KnSpec::new(Arc::new(Geometric::new(0.3)?), 10)?;

    let emp = simulate_kn(&spec, samples, seed);
    let (tv, radius) = empirical_tv(&emp, &kn_full_pmf(&spec, 1e-12)?)?;
    println!("K_n         mean {:.4}  tv to exact {tv:.5} (radius {radius:.5})", emp.mean());

    let star = simulate_kn_star(&spec, samples, seed)?;
    let gof = chi_square_gof(&star, &kn_star_full_pmf(&spec, 1e-12)?, 1e-3)?;
    println!("K_n*        mean {:.4}  chi2 {:.2} on {} dof, p = {:.3}", star.mean(), gof.statistic, gof.dof, gof.p_value);

    let near = gumbel_spec(20, 2, 0.5)?;
    let emp = simulate_kn_al(&near, samples, seed);
    let (tv, radius) = empirical_tv(&emp, &near_order_mixture_pmf(&near, 1e-10)?)?;
    println!("K_n(a, l)   mean {:.4}  tv to exact {tv:.5} (radius {radius:.5})", emp.mean());
    Ok(())
}
