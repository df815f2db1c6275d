//! Spherical t-design verification by exact monomial moments, and detection
//! of sharp configurations (designs with few distinct inner products).
//!
//! The checker works in the monomial basis: exact sphere moments are available
//! in closed form, and the monomial count is acceptable at desk scale
//! (d <= 8, t <= 12 or so). A cap guards against combinatorial explosion.

use serde::{Deserialize, Serialize};

use crate::config::Configuration;
use crate::{Error, Result};

/// Default cap on the number of monomials a single check may enumerate.
pub const MONOMIAL_CAP: usize = 1_000_000;

/// Default tolerance for clustering inner products into distinct values,
/// formed by splitting the sorted list at gaps larger than the tolerance.
pub const CLUSTER_TOL: f64 = 1e-7;

/// Outcome of a design check up to a requested strength.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignReport {
    /// Largest `t'` such that every monomial of total degree <= `t'` matched
    /// its sphere moment within tolerance.
    pub max_strength: usize,
    /// Largest deviation seen over all tested monomials.
    pub worst_residual: f64,
}

/// Outcome of a sharpness check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SharpReport {
    pub is_sharp: bool,
    /// Number of distinct inner products between distinct points.
    pub m: usize,
    /// Cluster representatives, sorted ascending.
    pub inner_products: Vec<f64>,
    /// Design strength a sharp configuration must reach: `2m - 1`.
    pub design_strength_needed: usize,
}

/// Exact monomial moment over the unit sphere `S^{d-1}`: zero when any
/// exponent is odd, otherwise
/// `prod (alpha_i - 1)!! / (d (d+2) ... (d + |alpha| - 2))`.
pub fn sphere_moment(d: usize, alpha: &[usize]) -> f64 {
    debug_assert!(
        alpha.len() == d,
        "multi-index length must equal the dimension"
    );
    if alpha.iter().any(|a| a % 2 == 1) {
        return 0.0;
    }
    let total: usize = alpha.iter().sum();
    let mut value = 1.0;
    for &a in alpha {
        let mut df = 1.0;
        let mut i = a;
        while i > 1 {
            df *= (i - 1) as f64;
            i -= 2;
        }
        value *= df;
    }
    for j in 1..=(total / 2) {
        value /= (d + 2 * j - 2) as f64;
    }
    value
}

/// Tests all monomials of total degree 1..=t against their sphere moments.
/// Uses the default monomial cap.
pub fn design_check(config: &Configuration, t: usize, tol: f64) -> Result<DesignReport> {
    design_check_capped(config, t, tol, MONOMIAL_CAP)
}

/// [`design_check`] with an explicit enumeration cap.
pub fn design_check_capped(
    config: &Configuration,
    t: usize,
    tol: f64,
    cap: usize,
) -> Result<DesignReport> {
    if t < 1 {
        return Err(Error::InvalidParameter(format!(
            "design check needs t >= 1, got {t}"
        )));
    }
    let d = config.dim();
    let count = monomial_count(d, t);
    if count > cap {
        return Err(Error::MonomialCapExceeded { count, cap });
    }

    let n = config.len() as f64;
    let mut worst = 0.0f64;
    let mut max_strength = 0usize;
    let mut all_below = true;
    for degree in 1..=t {
        let mut degree_worst = 0.0f64;
        for_each_monomial(d, degree, &mut |alpha| {
            let mut sum = 0.0;
            for x in config.vectors() {
                let mut term = 1.0;
                for (xi, &ai) in x.iter().zip(alpha) {
                    if ai > 0 {
                        term *= xi.powi(ai as i32);
                    }
                }
                sum += term;
            }
            let residual = (sum / n - sphere_moment(d, alpha)).abs();
            degree_worst = degree_worst.max(residual);
        });
        worst = worst.max(degree_worst);
        if all_below && degree_worst <= tol {
            max_strength = degree;
        } else {
            all_below = false;
        }
    }
    Ok(DesignReport {
        max_strength,
        worst_residual: worst,
    })
}

/// Clusters the off-diagonal inner products with tolerance `tol` into `m`
/// distinct values, then checks design strength `2m - 1`. A configuration
/// whose check would exceed the monomial cap is reported as not sharp.
pub fn sharp_check(config: &Configuration, tol: f64) -> Result<SharpReport> {
    let gram = crate::config::gram(config);
    let mut values = gram.off_diagonal();
    values.sort_by(|a, b| a.partial_cmp(b).expect("finite inner products"));

    let mut clusters: Vec<Vec<f64>> = Vec::new();
    for v in values {
        match clusters.last_mut() {
            Some(cluster) if v - cluster.last().copied().unwrap() <= tol => cluster.push(v),
            _ => clusters.push(vec![v]),
        }
    }
    let m = clusters.len();
    let inner_products: Vec<f64> = clusters
        .iter()
        .map(|c| c.iter().sum::<f64>() / c.len() as f64)
        .collect();
    let needed = 2 * m - 1;

    let is_sharp = match design_check(config, needed, tol) {
        Ok(report) => report.max_strength >= needed,
        Err(Error::MonomialCapExceeded { .. }) => false,
        Err(e) => return Err(e),
    };
    Ok(SharpReport {
        is_sharp,
        m,
        inner_products,
        design_strength_needed: needed,
    })
}

fn monomial_count(d: usize, t: usize) -> usize {
    // sum over degrees 1..=t of C(degree + d - 1, d - 1), saturating
    let mut total = 0usize;
    for degree in 1..=t {
        let mut c = 1u128;
        for i in 0..(d - 1) {
            c = c * (degree + d - 1 - i) as u128 / (i + 1) as u128;
        }
        total = total.saturating_add(c.min(usize::MAX as u128) as usize);
    }
    total
}

fn for_each_monomial(d: usize, degree: usize, f: &mut impl FnMut(&[usize])) {
    let mut alpha = vec![0usize; d];
    fill(&mut alpha, 0, degree, f);
}

fn fill(alpha: &mut Vec<usize>, pos: usize, remaining: usize, f: &mut impl FnMut(&[usize])) {
    if pos == alpha.len() - 1 {
        alpha[pos] = remaining;
        f(alpha);
        return;
    }
    for v in 0..=remaining {
        alpha[pos] = v;
        fill(alpha, pos + 1, remaining - v, f);
    }
}
