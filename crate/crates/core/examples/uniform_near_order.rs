//! Counts just below the second largest of uniform samples: the negative
//! binomial bound, its paper closed form, and the exact distance from the
//! mixture law.
//!
//! ```bash
//! cargo run --release --example uniform_near_order
//! ```

use maxties::approximants::{tv_distance, TruncatedPmf};
use maxties::bounds::{near_order_mixture_pmf, thm3_bound, uniform_closed_bound, uniform_m_exact, uniform_spec};

fn main() -> Result<(), maxties::Error> {
    let (b, ell) = (1.0, 2);
    println!("{:>4} {:>6} {:>10} {:>10} {:>10} {:>10}", "n", "a", "M_1", "bound", "closed", "exact tv");
    for n in [6, 10, 12] {
        for a in [0.02, 0.05, 0.1] {
            let spec = uniform_spec(n, ell, a, b)?;
            let report = thm3_bound(&spec, 1e-12)?;
            let law = near_order_mixture_pmf(&spec, 1e-12)?;
            let nb = TruncatedPmf::negative_binomial(ell as f64, report.params["beta"], 1e-12)?;
            println!(
                "{n:>4} {a:>6} {:>10.6} {:>10.6} {:>10.6} {:>10.6}",
                uniform_m_exact(n, ell, a, b, 1)?,
                report.bound,
                uniform_closed_bound(n, ell, a, b)?,
                tv_distance(&law, &nb).hi
            );
        }
    }
    Ok(())
}
