//! Energies of unit-norm vector configurations on spheres: p-frame potentials,
//! general inner-product and chordal kernels, closed-form lower bounds,
//! spherical-design verification, multi-start minimization, and linear-programming
//! optimality certificates built from Hermite interpolation.
//!
//! # Conventions
//!
//! **All energies sum over ordered pairs** `(i, j)` with `i != j`, so every
//! unordered pair is counted twice. Half the literature uses unordered pairs;
//! values here are exactly twice those. Self inner products are always excluded.
//!
//! A configuration is an ordered list of `N` unit vectors in `R^d`. Two
//! configurations are considered equivalent when they differ by an orthogonal
//! transform, a permutation, or per-vector sign flips; see
//! [`config::CanonicalInvariant`] for the comparison tool.
//!
//! Randomized operations take explicit seeds and use the ChaCha8 stream cipher
//! as PRNG, so every result is reproducible bit for bit.

pub mod bounds;
pub mod certify;
pub mod config;
pub mod constructions;
pub mod designs;
mod error;
pub mod optimizer;
pub mod potentials;
#[cfg(test)]
pub(crate) mod test_util;

pub use config::{CanonicalInvariant, Configuration, GramMatrix};
pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
