//! Configurations of unit vectors: representation, Gram computations, the
//! projective lifting map, frame diagnostics, and equivalence-class comparison.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::{Error, Result};

/// Norm slack accepted by constructors. Inputs within this distance of unit
/// norm are renormalized (tolerates file round-trip noise); anything farther
/// is rejected as bad data.
pub const NORM_TOL: f64 = 1e-6;

/// Default elementwise tolerance for canonical-invariant comparison.
pub const INVARIANT_TOL: f64 = 1e-8;

/// An ordered list of `N` unit vectors in `R^d`, `N >= 2`, `d >= 2`.
///
/// Vectors are the columns of the synthesis matrix; serialization is row
/// major (one JSON array per vector), as
/// `{"dim": d, "n": N, "vectors": [[..d reals..], ..]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "ConfigurationWire", try_from = "ConfigurationWire")]
pub struct Configuration {
    dim: usize,
    vectors: Vec<Vec<f64>>,
}

#[derive(Clone, Serialize, Deserialize)]
struct ConfigurationWire {
    dim: usize,
    n: usize,
    vectors: Vec<Vec<f64>>,
}

impl From<Configuration> for ConfigurationWire {
    fn from(config: Configuration) -> Self {
        ConfigurationWire {
            dim: config.dim,
            n: config.vectors.len(),
            vectors: config.vectors,
        }
    }
}

impl TryFrom<ConfigurationWire> for Configuration {
    type Error = String;

    fn try_from(wire: ConfigurationWire) -> std::result::Result<Self, String> {
        if wire.n != wire.vectors.len() {
            return Err(format!(
                "n = {} but {} vectors present",
                wire.n,
                wire.vectors.len()
            ));
        }
        Configuration::new(wire.dim, wire.vectors).map_err(|e| e.to_string())
    }
}

impl Configuration {
    /// Builds a configuration, renormalizing vectors within [`NORM_TOL`] of
    /// unit norm and rejecting anything farther.
    pub fn new(dim: usize, vectors: Vec<Vec<f64>>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidParameter(format!(
                "dim must be >= 2, got {dim}"
            )));
        }
        if vectors.len() < 2 {
            return Err(Error::InvalidParameter(format!(
                "need at least 2 vectors, got {}",
                vectors.len()
            )));
        }
        let mut normalized = Vec::with_capacity(vectors.len());
        for (index, v) in vectors.into_iter().enumerate() {
            if v.len() != dim {
                return Err(Error::InvalidParameter(format!(
                    "vector {index} has {} entries, expected {dim}",
                    v.len()
                )));
            }
            let norm = norm(&v);
            if !norm.is_finite() || (norm - 1.0).abs() > NORM_TOL {
                return Err(Error::NotUnitNorm {
                    index,
                    norm,
                    tol: NORM_TOL,
                });
            }
            normalized.push(v.iter().map(|x| x / norm).collect());
        }
        Ok(Self {
            dim,
            vectors: normalized,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of vectors `N`.
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    pub fn vector(&self, i: usize) -> &[f64] {
        &self.vectors[i]
    }

    /// Serializes the wire schema at full double precision.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("configuration serializes")
    }

    /// Parses and validates the JSON schema emitted by [`Self::to_json`].
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| Error::InvalidParameter(format!("configuration JSON: {e}")))
    }
}

/// Symmetric `N x N` matrix of pairwise inner products.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    entries: Vec<Vec<f64>>,
}

impl GramMatrix {
    pub fn entries(&self) -> &[Vec<f64>] {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.entries[i][j]
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    /// Off-diagonal entries for `i < j`, in row order.
    pub fn off_diagonal(&self) -> Vec<f64> {
        let n = self.entries.len();
        let mut out = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in (i + 1)..n {
                out.push(self.entries[i][j]);
            }
        }
        out
    }
}

/// Sorted multiset of the `N(N-1)/2` absolute off-diagonal Gram entries.
///
/// Equal configurations under orthogonal transforms, permutations, or sign
/// flips have equal invariants. The converse does not hold in general, so
/// matching invariants are a necessary condition for equivalence, not a proof.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CanonicalInvariant {
    sorted_abs_offdiag: Vec<f64>,
}

impl CanonicalInvariant {
    pub fn values(&self) -> &[f64] {
        &self.sorted_abs_offdiag
    }

    /// Largest elementwise difference, or `None` when the multiset sizes differ.
    pub fn max_abs_diff(&self, other: &Self) -> Option<f64> {
        if self.sorted_abs_offdiag.len() != other.sorted_abs_offdiag.len() {
            return None;
        }
        Some(
            self.sorted_abs_offdiag
                .iter()
                .zip(&other.sorted_abs_offdiag)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max),
        )
    }

    /// Elementwise match within `tol` ([`INVARIANT_TOL`] by default).
    pub fn matches(&self, other: &Self, tol: f64) -> bool {
        self.max_abs_diff(other).is_some_and(|d| d <= tol)
    }

    /// Short stable label: values are quantized to 1e-5 and hashed, so
    /// configurations equal to that resolution share the digest. Used to spot
    /// structural transitions along sweeps; it is a heuristic label, not a
    /// certified identity.
    pub fn digest(&self) -> String {
        let mut hasher = Sha256::new();
        for v in &self.sorted_abs_offdiag {
            let q = (v * 1e5).round() as i64;
            hasher.update(q.to_le_bytes());
        }
        let out = hasher.finalize();
        out[..8].iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Pairwise inner products `<x_i, x_j>` in double precision.
pub fn gram(config: &Configuration) -> GramMatrix {
    let n = config.len();
    let mut entries = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i..n {
            let v = dot(config.vector(i), config.vector(j));
            entries[i][j] = v;
            entries[j][i] = v;
        }
    }
    GramMatrix { entries }
}

/// Rank-one projectors `P_i = x_i x_i^T`, each flattened row major to length
/// `d^2`. Frobenius geometry gives `<P_x,P_y> = <x,y>^2` and
/// `|P_x - P_y|^2 = 2 - 2<x,y>^2`, so the lifted points are unit vectors in
/// `R^{d^2}` that identify antipodal inputs.
pub fn lift_projective(config: &Configuration) -> Vec<Vec<f64>> {
    let d = config.dim();
    config
        .vectors()
        .iter()
        .map(|x| {
            let mut flat = Vec::with_capacity(d * d);
            for a in 0..d {
                for b in 0..d {
                    flat.push(x[a] * x[b]);
                }
            }
            flat
        })
        .collect()
}

/// The lifted points as a configuration in `R^{d^2}` (they are unit vectors
/// under the Frobenius norm).
pub fn lifted_configuration(config: &Configuration) -> Configuration {
    Configuration::new(config.dim() * config.dim(), lift_projective(config))
        .expect("projective lift of a valid configuration is valid")
}

/// Frame operator `S = sum_k x_k x_k^T` as a `d x d` matrix. Tightness means
/// `S = (N/d) I`; its trace always equals `N`.
pub fn frame_operator(config: &Configuration) -> Vec<Vec<f64>> {
    let d = config.dim();
    let mut s = vec![vec![0.0; d]; d];
    for x in config.vectors() {
        for a in 0..d {
            for b in 0..d {
                s[a][b] += x[a] * x[b];
            }
        }
    }
    s
}

/// True iff the smallest singular value of the synthesis matrix exceeds `tol`,
/// i.e. the vectors span `R^d` with margin.
pub fn is_frame(config: &Configuration, tol: f64) -> bool {
    let s = frame_operator(config);
    let eigs = symmetric_eigenvalues(&s);
    // singular values of the synthesis matrix are sqrt of the frame
    // operator's eigenvalues
    let min = eigs.iter().cloned().fold(f64::INFINITY, f64::min);
    min.max(0.0).sqrt() > tol
}

/// Sorted multiset of absolute off-diagonal Gram entries.
pub fn canonical_invariant(config: &Configuration) -> CanonicalInvariant {
    let mut values: Vec<f64> = gram(config)
        .off_diagonal()
        .iter()
        .map(|v| v.abs())
        .collect();
    values.sort_by(|a, b| a.partial_cmp(b).expect("gram entries are finite"));
    CanonicalInvariant {
        sorted_abs_offdiag: values,
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

/// Eigenvalues of a small symmetric matrix by cyclic Jacobi rotations.
/// Adequate for the d <= ~16 frame operators this crate sees.
fn symmetric_eigenvalues(m: &[Vec<f64>]) -> Vec<f64> {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m.to_vec();
    for _sweep in 0..64 {
        let mut off = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off += a[i][j] * a[i][j];
            }
        }
        if off.sqrt() < 1e-14 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i][i]).collect()
}
