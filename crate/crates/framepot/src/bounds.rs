//! Closed-form lower bounds and reference values: the Welch coherence bound,
//! the spherical-design bound for even exponents, lifted-simplex energies and
//! their switching points, Fekete ratios, and known asymptotic constants.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Which bound produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundKind {
    Welch,
    SphericalDesign,
    LiftedEtfValue,
    LpCertificate,
}

/// An analytic bound value with its provenance and applicability note.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub value: f64,
    pub kind: BoundKind,
    pub applicability: String,
}

/// Welch bound on the coherence of `N` unit vectors in `R^d`:
/// `sqrt((N-d)/(d(N-1)))`, zero when `N <= d`.
pub fn welch_bound(n: usize, d: usize) -> BoundReport {
    let value = if n > d {
        ((n - d) as f64 / (d * (n - 1)) as f64).sqrt()
    } else {
        0.0
    };
    BoundReport {
        value,
        kind: BoundKind::Welch,
        applicability: "equality iff ETF, only possible if N <= d(d+1)/2".to_string(),
    }
}

/// Design bound on the p-frame potential for even `p >= 2`:
/// `N^2 * (1*3*5...(p-1)) / (d(d+2)...(d+p-2)) - N`.
///
/// The double-factorial quotient is folded in one factor at a time (multiply,
/// then divide) so the running value stays bounded for p into the hundreds
/// and the p = 2 case reduces to exactly `N^2/d - N`.
pub fn design_bound(n: usize, d: usize, p: usize) -> Result<BoundReport> {
    if p < 2 || p % 2 != 0 {
        return Err(Error::InvalidParameter(format!(
            "design bound needs even p >= 2, got {p}"
        )));
    }
    let mut value = (n * n) as f64;
    for i in 1..=(p / 2) {
        value *= (2 * i - 1) as f64;
        value /= (d + 2 * i - 2) as f64;
    }
    Ok(BoundReport {
        value: value - n as f64,
        kind: BoundKind::SphericalDesign,
        applicability: "equality iff the symmetrized configuration is a spherical p-design"
            .to_string(),
    })
}

/// Exact p-frame potential of the lifted simplex frame: `(k+1) k (1/k)^p`,
/// independent of the ambient dimension.
pub fn lifted_etf_value(k: usize, p: f64) -> f64 {
    ((k + 1) * k) as f64 * (1.0 / k as f64).powf(p)
}

/// Exponent where the lifted-simplex energies for `k` and `k+1` cross:
/// `p_k = (log(k+2) - log k) / (log(k+1) - log k)`, with `p_0 = 0` by
/// convention.
pub fn switching_point(k: usize) -> f64 {
    if k == 0 {
        return 0.0;
    }
    let k = k as f64;
    ((k + 2.0).ln() - k.ln()) / ((k + 1.0).ln() - k.ln())
}

/// Ratios `F_N / (N (N-1))` for a list of `(N, F_N)` pairs sorted by `N`.
/// The sequence of ratios of true minima is nondecreasing in `N`; the caller
/// asserts monotonicity.
pub fn fekete_ratio(values: &[(usize, f64)]) -> Vec<f64> {
    debug_assert!(
        values.windows(2).all(|w| w[0].0 <= w[1].0),
        "values sorted by N"
    );
    values
        .iter()
        .map(|&(n, f)| f / (n * (n - 1)) as f64)
        .collect()
}

/// Asymptotic constant `tau = lim F_{p,N,d} / N^2` where known: `1/d` for
/// `p <= 2`, the half-integer moment ratio for `d = 2` and even `p`.
/// Returns `None` outside the two proven cases.
pub fn tau_reference(d: usize, p: f64) -> Option<f64> {
    if p > 0.0 && p <= 2.0 {
        return Some(1.0 / d as f64);
    }
    if d == 2 && p > 0.0 && p.fract() == 0.0 && (p as usize) % 2 == 0 {
        let p = p as usize;
        let mut ratio = 1.0;
        for i in 1..=(p / 2) {
            ratio *= (2 * i - 1) as f64 / (2 * i) as f64;
        }
        return Some(ratio);
    }
    None
}
