//! Evolutionary and quantum game theory on a common numerical footing.
//!
//! The crate covers finite two-player games ([`classical`]), the replicator
//! dynamics and its commutator form ([`replicator`]), density-matrix
//! machinery ([`quantum`]), three quantum game protocols ([`games`]) and
//! Gibbs ensembles ([`thermo`]). The guide in `book/` walks through each of
//! these with runnable snippets; those snippets are compiled as doctests of
//! this crate.
//!
//! ```
//! use qgame::replicator::{integrate, FrequencyVector};
//!
//! // Prisoner's dilemma: cooperators die out
//! let a = vec![vec![-1.0, -20.0], vec![0.0, -10.0]];
//! let traj = integrate(&a, &FrequencyVector::binary(0.9)?, 20.0, 1e-3)?;
//! assert!(traj.last().as_slice()[0] < 1e-3);
//! # Ok::<(), qgame::Error>(())
//! ```

pub mod classical;
pub mod error;
pub mod format;
pub mod games;
pub mod linalg;
pub mod quantum;
pub mod replicator;
pub mod thermo;

pub use error::{Error, Result};
pub use num_complex::Complex64;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/classical-games.md")]
    mod classical_games {}
    #[doc = include_str!("../../../book/src/replicator.md")]
    mod replicator {}
    #[doc = include_str!("../../../book/src/lax-form.md")]
    mod lax_form {}
    #[doc = include_str!("../../../book/src/density-matrices.md")]
    mod density_matrices {}
    #[doc = include_str!("../../../book/src/quantum-games.md")]
    mod quantum_games {}
    #[doc = include_str!("../../../book/src/entropy.md")]
    mod entropy {}
    #[doc = include_str!("../../../book/src/thermodynamics.md")]
    mod thermodynamics {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
