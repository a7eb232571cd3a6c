//! Every bound against its certified exact distance on the default grids.
//!
//! ```bash
//! cargo run --release --example verify_sweep
//! ```

use maxties::cli::summarise;
use maxties::verify::{run_all, VerifyOptions};

fn main() -> Result<(), maxties::Error> {
    let rows = run_all(&VerifyOptions { mc_samples: 20_000, ..VerifyOptions::default() })?;
    print!("{}", summarise(&rows));
    let failed = rows.iter().filter(|r| !r.pass).count();
    println!("{} checks, {failed} failed", rows.len());
    Ok(())
}
