//! Linear-programming lower-bound certificates for pair energies on spheres.
//!
//! Given a kernel `a` and the distinct inner products of a candidate
//! configuration, the certificate interpolates `a` to second order at each
//! inner product (Hermite interpolation against the squared node polynomial),
//! verifies `h <= a` pointwise and positive definiteness of `h` through its
//! expansion in the dimension-appropriate orthogonal basis, and emits the
//! bound `N^2 c_0 - N h(1)` valid for every `N`-point configuration. When the
//! candidate attains the bound the certificate has zero gap and proves
//! optimality.

use serde::{Deserialize, Serialize};

use crate::constructions::half_circle;
use crate::potentials::fp_eval;
use crate::{Error, Result};

/// Tolerance below which a pointwise excess `h - a` is attributed to
/// round-off rather than an invalid interpolant.
pub const POINTWISE_TOL: f64 = 1e-9;

/// Expansion coefficients above this (negative) floor count as nonnegative;
/// the interpolation construction guarantees exact nonnegativity for valid
/// inputs, so tiny negatives are round-off.
pub const PD_TOL: f64 = -1e-12;

/// Default number of pointwise grid samples on `[-1, 1 - delta]`.
pub const GRID_POINTS: usize = 10_000;

/// Default standoff from `t = 1` for the pointwise grid.
pub const GRID_DELTA: f64 = 1e-9;

/// Real polynomial in the monomial basis, coefficients ascending by degree.
/// The trailing coefficient is nonzero unless the polynomial is zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: vec![0.0] }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0.0; n];
        for (i, v) in out.iter_mut().enumerate() {
            *v = self.coeffs.get(i).copied().unwrap_or(0.0)
                + other.coeffs.get(i).copied().unwrap_or(0.0);
        }
        Self::new(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1.0))
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Value of the `order`-th derivative at `t`.
    pub fn deriv_at(&self, t: f64, order: usize) -> f64 {
        let mut total = 0.0;
        for (i, &c) in self.coeffs.iter().enumerate().skip(order) {
            let mut factor = 1.0;
            for k in 0..order {
                factor *= (i - k) as f64;
            }
            total += c * factor * t.powi((i - order) as i32);
        }
        total
    }
}

/// A kernel smooth enough for Hermite interpolation: supplies derivatives of
/// any requested order, or `None` where a derivative does not exist.
/// Order 0 is the value itself.
pub trait SmoothKernel {
    fn eval_deriv(&self, t: f64, order: usize) -> Option<f64>;
}

impl SmoothKernel for Polynomial {
    fn eval_deriv(&self, t: f64, order: usize) -> Option<f64> {
        Some(self.deriv_at(t, order))
    }
}

/// The transported p-frame kernel on the rescaled projective circle:
/// `a(u) = ((1+u)/2)^q` with `q = p/2`. Derivatives are supplied in closed
/// form; they stop existing at `u = -1` once the falling power goes negative.
#[derive(Debug, Clone, Copy)]
pub struct PowerHalfKernel {
    pub half_exponent: f64,
}

impl SmoothKernel for PowerHalfKernel {
    fn eval_deriv(&self, t: f64, order: usize) -> Option<f64> {
        let q = self.half_exponent;
        let base = (1.0 + t) / 2.0;
        let mut falling = 1.0;
        for i in 0..order {
            falling *= q - i as f64;
        }
        if falling == 0.0 {
            return Some(0.0);
        }
        let exponent = q - order as f64;
        if base == 0.0 && exponent < 0.0 {
            return None;
        }
        Some(falling * 0.5f64.powi(order as i32) * base.powf(exponent))
    }
}

/// Interpolation nodes: strictly increasing values in `[-1, 1)` with
/// positive multiplicities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeSet {
    nodes: Vec<(f64, usize)>,
}

impl NodeSet {
    pub fn new(nodes: Vec<(f64, usize)>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::InvalidParameter("node set cannot be empty".into()));
        }
        for &(t, m) in &nodes {
            if !(-1.0..1.0).contains(&t) {
                return Err(Error::InvalidParameter(format!("node {t} outside [-1, 1)")));
            }
            if m == 0 {
                return Err(Error::InvalidParameter("zero multiplicity".into()));
            }
        }
        if nodes.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::InvalidParameter(
                "nodes must be strictly increasing".into(),
            ));
        }
        Ok(Self { nodes })
    }

    /// Simple nodes (multiplicity 1) from unsorted distinct values.
    pub fn simple(values: &[f64]) -> Result<Self> {
        let mut sorted = values.to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite nodes"));
        Self::new(sorted.into_iter().map(|t| (t, 1)).collect())
    }

    /// Multiplicity-2 nodes from unsorted distinct values; this is the node
    /// polynomial `F^2` the certificate interpolates against.
    pub fn doubled(values: &[f64]) -> Result<Self> {
        let mut sorted = values.to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite nodes"));
        Self::new(sorted.into_iter().map(|t| (t, 2)).collect())
    }

    pub fn nodes(&self) -> &[(f64, usize)] {
        &self.nodes
    }

    pub fn total_degree(&self) -> usize {
        self.nodes.iter().map(|&(_, m)| m).sum()
    }

    /// Node values repeated by multiplicity, ascending.
    pub fn expanded(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.total_degree());
        for &(t, m) in &self.nodes {
            out.extend(std::iter::repeat_n(t, m));
        }
        out
    }

    /// The monic node polynomial `prod (t - t_i)^{m_i}`.
    pub fn poly(&self) -> Polynomial {
        let mut out = Polynomial::constant(1.0);
        for &(t, m) in &self.nodes {
            let factor = Polynomial::new(vec![-t, 1.0]);
            for _ in 0..m {
                out = out.mul(&factor);
            }
        }
        out
    }

    /// Union with multiplicities added where nodes coincide exactly.
    pub fn product(&self, other: &Self) -> Self {
        let mut merged: Vec<(f64, usize)> = self.nodes.clone();
        for &(t, m) in &other.nodes {
            match merged.iter_mut().find(|(s, _)| *s == t) {
                Some(entry) => entry.1 += m,
                None => merged.push((t, m)),
            }
        }
        merged.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite nodes"));
        Self { nodes: merged }
    }
}

/// Confluent divided differences over the sorted abscissae `z` (equal values
/// adjacent); entry `[0][k]` is the Newton coefficient of degree `k`.
fn newton_coefficients(a: &dyn SmoothKernel, z: &[f64]) -> Result<Vec<f64>> {
    let n = z.len();
    let mut table = vec![vec![0.0; n]; n];
    for i in 0..n {
        table[i][i] = a
            .eval_deriv(z[i], 0)
            .ok_or(Error::DerivativeUnavailable { order: 0, t: z[i] })?;
    }
    let mut factorial = 1.0;
    for width in 1..n {
        factorial *= width as f64;
        for i in 0..n - width {
            let j = i + width;
            table[i][j] = if z[i] == z[j] {
                a.eval_deriv(z[i], width)
                    .ok_or(Error::DerivativeUnavailable {
                        order: width,
                        t: z[i],
                    })?
                    / factorial
            } else {
                (table[i + 1][j] - table[i][j - 1]) / (z[j] - z[i])
            };
        }
    }
    Ok((0..n).map(|k| table[0][k]).collect())
}

/// Hermite interpolating polynomial of degree below the node polynomial's:
/// agrees with `a` at every node to the order of its multiplicity. Built by
/// divided differences with repeated abscissae.
pub fn hermite_interpolant(a: &dyn SmoothKernel, g: &NodeSet) -> Result<Polynomial> {
    let z = g.expanded();
    let coeffs = newton_coefficients(a, &z)?;
    let mut h = Polynomial::zero();
    let mut basis = Polynomial::constant(1.0);
    for (k, &c) in coeffs.iter().enumerate() {
        h = h.add(&basis.scale(c));
        if k + 1 < coeffs.len() {
            basis = basis.mul(&Polynomial::new(vec![-z[k], 1.0]));
        }
    }
    Ok(h)
}

/// The quotient `Q(a, g) = (a - H(a, g)) / g` as a smooth kernel.
///
/// Values and derivatives come from the divided-difference representation,
/// which fills the removable singularities at the nodes: `Q(a,g)(t)` is the
/// divided difference of `a` over the nodes plus `t`, and the n-th derivative
/// at `t` adds `n` further repetitions of `t`.
pub struct HermiteQuotient<'a> {
    base: &'a dyn SmoothKernel,
    nodes: NodeSet,
}

impl<'a> HermiteQuotient<'a> {
    pub fn new(base: &'a dyn SmoothKernel, nodes: NodeSet) -> Self {
        Self { base, nodes }
    }
}

impl SmoothKernel for HermiteQuotient<'_> {
    fn eval_deriv(&self, t: f64, order: usize) -> Option<f64> {
        let mut z = self.nodes.expanded();
        z.extend(std::iter::repeat_n(t, order + 1));
        z.sort_by(|a, b| a.partial_cmp(b).expect("finite abscissae"));
        let coeffs = newton_coefficients(self.base, &z).ok()?;
        let mut factorial = 1.0;
        for i in 1..=order {
            factorial *= i as f64;
        }
        Some(coeffs[z.len() - 1] * factorial)
    }
}

/// Convenience constructor matching the quotient's usual notation.
pub fn hermite_quotient<'a>(a: &'a dyn SmoothKernel, g: &NodeSet) -> HermiteQuotient<'a> {
    HermiteQuotient::new(a, g.clone())
}

/// Coefficients of `h` in the orthogonal basis certifying positive
/// definiteness on `S^{d-1}`, normalized so every basis polynomial equals 1
/// at `t = 1`: Chebyshev for d = 2, normalized Gegenbauer otherwise.
pub fn gegenbauer_expand(h: &Polynomial, d: usize) -> Result<Vec<f64>> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!(
            "expansion needs d >= 2, got {d}"
        )));
    }
    let degree = h.degree();
    let basis = gegenbauer_basis(d, degree);
    // Back-substitution: each basis polynomial has exact degree k.
    let mut residual = h.clone();
    let mut out = vec![0.0; degree + 1];
    for k in (0..=degree).rev() {
        let lead = basis[k].coeffs().get(k).copied().unwrap_or(0.0);
        let c = residual.coeffs().get(k).copied().unwrap_or(0.0) / lead;
        out[k] = c;
        residual = residual.sub(&basis[k].scale(c));
    }
    Ok(out)
}

fn gegenbauer_basis(d: usize, degree: usize) -> Vec<Polynomial> {
    let mut basis = Vec::with_capacity(degree + 1);
    basis.push(Polynomial::constant(1.0));
    if degree == 0 {
        return basis;
    }
    let t = Polynomial::new(vec![0.0, 1.0]);
    if d == 2 {
        // Chebyshev: T_{k+1} = 2 t T_k - T_{k-1}
        basis.push(t.clone());
        for k in 1..degree {
            let next = t.mul(&basis[k]).scale(2.0).sub(&basis[k - 1]);
            basis.push(next);
        }
    } else {
        // Gegenbauer with lambda = (d-2)/2, then normalized at t = 1:
        // (k+1) C_{k+1} = 2(k+lambda) t C_k - (k + 2 lambda - 1) C_{k-1}
        let lambda = (d as f64 - 2.0) / 2.0;
        let mut c_polys = vec![Polynomial::constant(1.0), t.scale(2.0 * lambda)];
        for k in 1..degree {
            let kf = k as f64;
            let next = t
                .mul(&c_polys[k])
                .scale(2.0 * (kf + lambda))
                .sub(&c_polys[k - 1].scale(kf + 2.0 * lambda - 1.0))
                .scale(1.0 / (kf + 1.0));
            c_polys.push(next);
        }
        for c in c_polys.into_iter().skip(1) {
            let at_one = c.eval(1.0);
            basis.push(c.scale(1.0 / at_one));
        }
    }
    basis
}

/// A lower-bound certificate. Valid when both checks pass; the bound
/// `N^2 c_0 - N h(1)` then holds for the ordered-pair energy of the kernel
/// over every `N`-point configuration on `S^{d-1}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Certificate {
    pub interpolant: Polynomial,
    pub expansion_coeffs: Vec<f64>,
    pub lower_bound: f64,
    pub pointwise_ok: bool,
    pub pd_ok: bool,
    pub dim: usize,
    /// Grid point witnessing `h > a` when the pointwise check failed.
    pub pointwise_witness: Option<f64>,
    /// Index of the offending coefficient when the PD check failed.
    pub negative_coeff_index: Option<usize>,
}

impl Certificate {
    pub fn is_valid(&self) -> bool {
        self.pointwise_ok && self.pd_ok
    }
}

/// Builds the certificate for kernel `a` from a candidate's distinct inner
/// products (each node must carry multiplicity 2, the squared node
/// polynomial of the interpolation construction). Uses the default grid.
pub fn lp_certify(
    a: &dyn SmoothKernel,
    n: usize,
    d: usize,
    nodes: &NodeSet,
) -> Result<Certificate> {
    lp_certify_with_grid(a, n, d, nodes, GRID_POINTS, GRID_DELTA)
}

/// [`lp_certify`] with explicit grid density and standoff from `t = 1`.
pub fn lp_certify_with_grid(
    a: &dyn SmoothKernel,
    n: usize,
    d: usize,
    nodes: &NodeSet,
    grid_points: usize,
    delta: f64,
) -> Result<Certificate> {
    if n < 2 || d < 2 || grid_points < 2 {
        return Err(Error::InvalidParameter(format!(
            "certificate needs N >= 2, d >= 2 and a real grid, got N = {n}, d = {d}"
        )));
    }
    if nodes.nodes().iter().any(|&(_, m)| m != 2) {
        return Err(Error::InvalidParameter(
            "certificate nodes must each have multiplicity 2".into(),
        ));
    }

    let h = hermite_interpolant(a, nodes)?;
    let expansion = gegenbauer_expand(&h, d)?;

    let mut pd_ok = true;
    let mut negative_coeff_index = None;
    for (k, &c) in expansion.iter().enumerate() {
        if c < PD_TOL {
            pd_ok = false;
            negative_coeff_index = Some(k);
            break;
        }
    }

    // Pointwise h <= a on a dense grid plus refinements around each node,
    // where h - a has double roots and violations would be smallest.
    let mut sample_points: Vec<f64> = (0..grid_points)
        .map(|i| -1.0 + (2.0 - delta) * i as f64 / (grid_points - 1) as f64)
        .collect();
    for &(t, _) in nodes.nodes() {
        sample_points.push(t);
        for k in 2..=8 {
            let off = 10f64.powi(-k);
            for candidate in [t - off, t + off] {
                if (-1.0..=1.0 - delta).contains(&candidate) {
                    sample_points.push(candidate);
                }
            }
        }
    }
    let mut pointwise_ok = true;
    let mut pointwise_witness = None;
    let mut worst = f64::NEG_INFINITY;
    for &t in &sample_points {
        let a_val = a
            .eval_deriv(t, 0)
            .ok_or(Error::DerivativeUnavailable { order: 0, t })?;
        let excess = h.eval(t) - a_val;
        if excess > worst {
            worst = excess;
            if excess > POINTWISE_TOL {
                pointwise_ok = false;
                pointwise_witness = Some(t);
            }
        }
    }

    let c0 = expansion.first().copied().unwrap_or(0.0);
    let lower_bound = (n * n) as f64 * c0 - n as f64 * h.eval(1.0);

    Ok(Certificate {
        interpolant: h,
        expansion_coeffs: expansion,
        lower_bound,
        pointwise_ok,
        pd_ok,
        dim: d,
        pointwise_witness,
        negative_coeff_index,
    })
}

/// A certificate together with the candidate's achieved energy.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertifiedRun {
    pub certificate: Certificate,
    /// p-frame potential of the equally spaced half-circle candidate.
    pub achieved: f64,
    /// `achieved - lower_bound`; zero (to round-off) proves optimality.
    pub gap: f64,
}

/// Certifies the `N` equally spaced half-circle points for the p-frame
/// potential with even `p`.
///
/// The candidate is lifted to the projective circle of radius `1/sqrt(2)` and
/// rescaled to a unit circle; squared inner products `|<x,y>|^2 = (1+u)/2`
/// turn the potential into the kernel `a(u) = ((1+u)/2)^(p/2)` acting on
/// circle inner products `u`. The candidate's distinct `u` values are
/// `cos(2 pi k / N)` for `k = 1 .. floor(N/2)`. The certificate is tight for
/// even `p <= 2N-2` (N even) or `p <= 2N-4` (N odd); beyond that the gap is
/// reported without any claim.
pub fn certify_half_circle(n: usize, p: usize) -> Result<CertifiedRun> {
    if n < 4 {
        return Err(Error::InvalidParameter(format!(
            "half-circle certificate needs N >= 4, got {n}"
        )));
    }
    if p < 2 || p % 2 != 0 {
        return Err(Error::InvalidParameter(format!(
            "half-circle certificate needs even p >= 2, got {p}"
        )));
    }
    let m = n / 2;
    let values: Vec<f64> = (1..=m)
        .map(|k| (2.0 * std::f64::consts::PI * k as f64 / n as f64).cos())
        .collect();
    let nodes = NodeSet::doubled(&values)?;
    let kernel = PowerHalfKernel {
        half_exponent: p as f64 / 2.0,
    };
    let certificate = lp_certify(&kernel, n, 2, &nodes)?;
    let achieved = fp_eval(&half_circle(n)?, p as f64)?.value;
    let gap = achieved - certificate.lower_bound;
    Ok(CertifiedRun {
        certificate,
        achieved,
        gap,
    })
}
