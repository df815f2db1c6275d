use thiserror::Error;

/// Errors produced by constructors, evaluators, and solvers.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter violates its stated precondition (wrong range, bad shape).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A vector is too far from unit norm to be normalized silently.
    #[error("vector {index} has norm {norm:.17e}, more than {tol:.1e} from 1")]
    NotUnitNorm { index: usize, norm: f64, tol: f64 },

    /// A pairwise value left the domain of the requested kernel.
    #[error("kernel domain violation at pair ({i},{j}): value {value:.17e}")]
    KernelDomain { i: usize, j: usize, value: f64 },

    /// Symmetrization requires coherence strictly below 1.
    #[error("configuration has coherence 1 (repeated or antipodal vectors); cannot symmetrize")]
    CoherenceOne,

    /// Design verification would enumerate too many monomials.
    #[error("monomial count {count} exceeds cap {cap}")]
    MonomialCapExceeded { count: usize, cap: usize },

    /// A kernel cannot supply the derivative order an interpolation needs.
    #[error("derivative of order {order} unavailable at t = {t:.17e}")]
    DerivativeUnavailable { order: usize, t: f64 },

    /// A numerical routine produced a non-finite value it cannot recover from.
    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),
}
