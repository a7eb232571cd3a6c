//! The Stein solution for the logarithmic law: values, the uniform bound, and
//! the residual of the Stein equation.
//!
//! ```bash
//! cargo run --release --example stein_solution
//! ```

use maxties::stein::{stein_bound_const, stein_check, stein_h, stein_solution, SteinTestFn};

fn main() -> Result<(), maxties::Error> {
    let alpha = 0.6;
    let t = SteinTestFn::new(alpha, [1, 3, 4], false)?;
    println!("E = {{1, 3, 4}}, alpha = {alpha}, P(L in E) = {:.6}", t.target_prob());
    println!("{:>3} {:>10} {:>12}", "k", "h(k)", "f_h(k)");
    for k in 0..=8 {
        println!("{k:>3} {:>10.6} {:>12.8}", stein_h(&t, k), stein_solution(&t, k, 1e-13)?);
    }
    let check = stein_check(&t, 200, 1e-13)?;
    println!("sup |f_h|        {:.6} (bound {:.6})", check.max_abs_solution, stein_bound_const(alpha)?);
    println!("max residual     {:.2e}", check.max_residual);
    println!("E[Stein operator] {:.2e}", check.characterization);
    Ok(())
}
