//! Computational toolkit for discrete infinite divisibility, binomial
//! thinning, discrete stable laws, and limit laws of sums and maxima with a
//! random number of terms.
//!
//! The crate is organized bottom-up:
//!
//! - [`series`]: truncated power series and pmf prefixes ([`Series`], [`ProbSeq`]).
//! - [`transforms`]: Laplace-transform families and the LT/PGF bridge.
//! - [`divisibility`]: compound-Poisson certificates and refutations.
//! - [`dtype`]: thinning, D-types, discrete stable and self-decomposable laws.
//! - [`random_sums`]: the `P_phi` sample-size class and phi-ID limits of random sums.
//! - [`max_random`]: lattice max-types and phi-MID limits of random maxima.
//! - [`samplers`]: seeded stochastic-representation samplers and KS distances.
//! - [`cli`]: the `idlab` command-line front end.

pub mod cli;
pub mod divisibility;
pub mod dtype;
pub mod error;
pub mod laws;
pub mod max_random;
pub mod random_sums;
pub mod report;
pub mod samplers;
pub mod series;
pub mod tolerances;
pub mod transforms;

pub use error::{Error, Result};
pub use report::{ConvergenceReport, Verdict};
pub use series::{ProbSeq, Series, DEFAULT_ORDER};
pub use transforms::{Exponent, LtSpec, PgfSpec};
