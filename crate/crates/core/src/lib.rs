//! Approximate sampling from homogeneous strongly Rayleigh distributions,
//! k-DPPs in particular, with the lazy base-exchange Metropolis chain.
//!
//! A distribution is anything implementing
//! [`HomogeneousDistribution`](distributions::HomogeneousDistribution): a
//! ground set `{0, .., n-1}`, a degree `k`, and an unnormalized log-mass
//! oracle. The chain moves between k-subsets by swapping one element in for
//! one element out; [`chain::mixing_budget`] says how many steps make its
//! output `ε`-close in total variation. The [`diagnostics`] module checks
//! those guarantees exactly on instances small enough to enumerate.
//!
//! ```
//! use srmix::chain::{sample, ChainConfig};
//! use srmix::distributions::KDpp;
//! use srmix::init::greedy_init_kdpp;
//! use srmix::linalg::SymmetricMatrix;
//!
//! let l = SymmetricMatrix::from_rows(&[
//!     vec![2.0, 0.5, 0.0],
//!     vec![0.5, 1.0, 0.3],
//!     vec![0.0, 0.3, 1.5],
//! ])?;
//! let dpp = KDpp::new(l, 2)?;
//! let start = greedy_init_kdpp(&dpp)?;
//! let out = sample(&dpp, &start.subset, &ChainConfig::new(0.01, 7))?;
//! assert_eq!(out.subset.len(), 2);
//! # Ok::<(), srmix::Error>(())
//! ```

pub mod chain;
pub mod cli;
pub mod diagnostics;
pub mod distributions;
mod error;
pub mod init;
pub mod json;
pub mod linalg;
mod subset;

pub use error::{Error, Result};
pub use subset::Subset;

// The book's code blocks run as doc-tests so the guide cannot drift from the
// API.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    struct Introduction;
    #[doc = include_str!("../../../book/src/distributions.md")]
    struct Distributions;
    #[doc = include_str!("../../../book/src/chain.md")]
    struct Chain;
    #[doc = include_str!("../../../book/src/greedy.md")]
    struct Greedy;
    #[doc = include_str!("../../../book/src/diagnostics.md")]
    struct Diagnostics;
    #[doc = include_str!("../../../book/src/cli.md")]
    struct Cli;
}
