//! All discrete bounds for a law read from a JSON descriptor.
//!
//! ```bash
//! cargo run --release --example custom_law -- '{"kind":"tabulated","weights":[0.1,0.2,0.3,0.4]}' 12
//! ```

use maxties::approximants::{tv_distance, TruncatedPmf};
use maxties::bounds::{thm1a_bound_with, thm1b_from_moments, thm2_from_moments};
use maxties::maxima::{kn_full_pmf, KnMoments, KnSpec};
use maxties::LawDescriptor;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let text = args.next().unwrap_or_else(|| r#"{"kind":"tabulated","weights":[0.1,0.2,0.3,0.4]}"#.into());
    let n: u64 = args.next().map_or(Ok(12), |s| s.parse())?;

    let law = LawDescriptor::from_json(&text)?.build_discrete()?;
    let spec = KnSpec::new(law, n)?;
    let m = KnMoments::compute(&spec, 1e-12)?;
    let kn = kn_full_pmf(&spec, 1e-12)?;
    println!("E[K] = {:.6}  Var(K) = {:.6}  P(K=1) = {:.6}", m.e1, m.variance(), m.p1);
    for (k, p) in kn.iter().take(8) {
        println!("  P(K = {k}) = {p:.6}");
    }

    match thm1a_bound_with(&spec, &m, 1e-12) {
        Ok(r) => {
            let tv = tv_distance(&kn, &TruncatedPmf::logarithmic(r.params["alpha"], 1e-12)?);
            println!("logarithmic (alpha = {:.4}): bound {:.4}, exact {:.4}", r.params["alpha"], r.bound, tv.hi);
        }
        Err(e) => println!("logarithmic: {e}"),
    }
    match thm1b_from_moments(&m) {
        Ok(r) => {
            let tv = tv_distance(&kn, &TruncatedPmf::logarithmic(r.params["beta"], 1e-12)?);
            println!("size-biased (beta = {:.4}): bound {:.4}, exact {:.4}", r.params["beta"], r.bound, tv.hi);
        }
        Err(e) => println!("size-biased: {e}"),
    }
    match thm2_from_moments(&m) {
        Ok(r) => {
            let tv = tv_distance(&kn, &TruncatedPmf::poisson(r.params["lambda"], 1e-12)?);
            println!("poisson (lambda = {:.4}): bound {:.4}, exact {:.4}", r.params["lambda"], r.bound, tv.hi);
        }
        Err(e) => println!("poisson: {e}"),
    }
    Ok(())
}
