//! Poisson bounds for the number of maxima of geometric samples with
//! `p = 1 - mu/n`, laid out as in the paper's table.
//!
//! ```bash
//! cargo run --release --example table1
//! ```

use maxties::bounds::round_half_away;
use maxties::cli::{table1_cell, TABLE1_MU, TABLE1_N};

fn main() -> Result<(), maxties::Error> {
    print!("{:>6}", "mu");
    for n in TABLE1_N {
        print!("{:>10}", format!("1e{}", (n as f64).log10().round()));
    }
    println!();
    for mu in TABLE1_MU {
        print!("{mu:>6}");
        for n in TABLE1_N {
            let report = table1_cell(mu, n, 1e-12)?;
            let cell = if report.informative { format!("{:.3}", round_half_away(report.bound, 3)) } else { "---".into() };
            print!("{cell:>10}");
        }
        println!();
    }
    Ok(())
}
