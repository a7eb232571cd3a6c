//! Logarithmic approximation of the number of maxima of 20 geometric
//! observations: the bound next to the exact total-variation distance.
//!
//! ```bash
//! cargo run --release --example geometric_log_bound
//! ```

use std::sync::Arc;

use maxties::approximants::{tv_distance, TruncatedPmf};
use maxties::bounds::thm1a_bound_with;
use maxties::distributions::Geometric;
use maxties::maxima::{kn_full_pmf, KnMoments, KnSpec};

fn main() -> Result<(), maxties::Error> {
    let n = 20;
    println!("{:>6} {:>10} {:>12} {:>12}", "p", "alpha", "bound", "exact tv");
    for i in 1..=10 {
        let p = 0.05 * i as f64;
        let spec = KnSpec::new(Arc::new(Geometric::new(p)?), n)?;
        let moments = KnMoments::compute(&spec, 1e-12)?;
        let report = thm1a_bound_with(&spec, &moments, 1e-12)?;
        let alpha = report.params["alpha"];
        let exact = tv_distance(&kn_full_pmf(&spec, 1e-12)?, &TruncatedPmf::logarithmic(alpha, 1e-12)?);
        println!("{p:>6.2} {alpha:>10.6} {:>12.6} {:>12.6}", report.bound, exact.hi);
    }
    Ok(())
}
