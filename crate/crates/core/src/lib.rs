//! Ties at the maximum of i.i.d. samples: exact laws, certified Stein-method
//! bounds against logarithmic, Poisson and negative binomial approximants, and
//! Monte Carlo checks.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod approximants;
pub mod bounds;
pub mod cli;
pub mod distributions;
pub mod error;
pub mod maxima;
pub mod montecarlo;
pub mod quadrature;
pub mod special;
pub mod stein;
pub mod verify;

pub use approximants::{tv_distance, TruncatedPmf, TvInterval};
pub use distributions::{ContinuousLaw, DiscreteLaw, Law, LawDescriptor, TailCertificate};
pub use error::{Certified, Error, Result};
pub use maxima::{KnMoments, KnSpec};
