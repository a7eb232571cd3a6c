//! Negative binomial approximation of a binomial with a random success
//! probability.
//!
//! ```bash
//! cargo run --release --example mixed_binomial
//! ```

use maxties::approximants::{tv_distance, TruncatedPmf};
use maxties::bounds::{mixed_binomial_pmf, thm4_bound, MixedBinomialSpec};

fn main() -> Result<(), maxties::Error> {
    let mixes: [&[(f64, f64)]; 3] = [&[(0.1, 1.0)], &[(0.1, 0.5), (0.2, 0.5)], &[(0.02, 0.9), (0.3, 0.1)]];
    for (n, ell) in [(8, 1), (10, 2)] {
        for atoms in mixes {
            let spec = MixedBinomialSpec::from_atoms(n, ell, atoms)?;
            let report = thm4_bound(&spec)?;
            let w = mixed_binomial_pmf(n - ell, atoms)?;
            let nb = TruncatedPmf::negative_binomial(ell as f64, report.params["beta"], 1e-14)?;
            println!(
                "n={n:<3} ell={ell} Q={atoms:?}\n    beta {:.5}  bound {:.5}  exact {:.5}",
                report.params["beta"],
                report.bound,
                tv_distance(&w, &nb).hi
            );
        }
    }
    Ok(())
}
