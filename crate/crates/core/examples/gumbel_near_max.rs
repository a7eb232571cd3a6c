//! Observations within distance `a` of the maximum of Gumbel samples: mixing
//! moments by quadrature against their closed forms, and the closed-form bound
//! against the generic pipeline.
//!
//! ```bash
//! cargo run --release --example gumbel_near_max
//! ```

use maxties::bounds::{gumbel_eq6_bound, gumbel_m_closed, gumbel_spec, m_j_integral, thm3_bound};

fn main() -> Result<(), maxties::Error> {
    println!("{:>5} {:>5} {:>14} {:>14} {:>10} {:>10}", "n", "a", "M_1 quad", "M_1 closed", "generic", "closed");
    for n in [20, 100] {
        for a in [0.1, 0.25, 0.5, 1.0] {
            let spec = gumbel_spec(n, 1, a)?;
            let quad = m_j_integral(&spec, 1, 1e-12)?;
            let closed = gumbel_m_closed(n, 1, a, 1)?;
            let generic = thm3_bound(&spec, 1e-12)?.bound;
            println!("{n:>5} {a:>5} {quad:>14.10} {closed:>14.10} {generic:>10.6} {:>10.6}", gumbel_eq6_bound(n, a)?);
        }
    }
    Ok(())
}
