//! Exact constructions of the named configurations: equally spaced half-circle
//! points, repeated orthonormal bases, simplices, lifted simplex frames,
//! symmetrized sets, and seeded uniform random configurations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::config::Configuration;
use crate::potentials;
use crate::{Error, Result};

/// A named construction with its kind-specific parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum NamedConfig {
    HalfCircle { n: usize },
    OnbCopies { d: usize, k: usize },
    OnbPlus { d: usize },
    Simplex { n: usize },
    LiftedEtf { d: usize, k: usize },
    SymmetrizedPair { base: Box<NamedConfig> },
    RandomUniform { n: usize, d: usize, seed: u64 },
}

impl NamedConfig {
    /// Builds the configuration, validating the kind's feasibility constraints.
    pub fn build(&self) -> Result<Configuration> {
        match self {
            NamedConfig::HalfCircle { n } => half_circle(*n),
            NamedConfig::OnbCopies { d, k } => onb_copies(*d, *k),
            NamedConfig::OnbPlus { d } => onb_plus(*d),
            NamedConfig::Simplex { n } => simplex(*n),
            NamedConfig::LiftedEtf { d, k } => lifted_etf(*d, *k),
            NamedConfig::SymmetrizedPair { base } => symmetrize(&base.build()?),
            NamedConfig::RandomUniform { n, d, seed } => random_uniform(*n, *d, *seed),
        }
    }
}

/// `N` equally spaced points on the half circle: `(cos(k pi/N), sin(k pi/N))`
/// for `k = 0..N-1`. The Grassmannian frame in `R^2`.
pub fn half_circle(n: usize) -> Result<Configuration> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "half_circle needs N >= 2, got {n}"
        )));
    }
    let vectors = (0..n)
        .map(|k| {
            let angle = k as f64 * std::f64::consts::PI / n as f64;
            vec![angle.cos(), angle.sin()]
        })
        .collect();
    Configuration::new(2, vectors)
}

/// `k` concatenated copies of the canonical basis of `R^d` (`N = kd`).
pub fn onb_copies(d: usize, k: usize) -> Result<Configuration> {
    if d < 2 || k < 1 {
        return Err(Error::InvalidParameter(format!(
            "onb_copies needs d >= 2 and k >= 1, got d = {d}, k = {k}"
        )));
    }
    let mut vectors = Vec::with_capacity(k * d);
    for _ in 0..k {
        for i in 0..d {
            let mut v = vec![0.0; d];
            v[i] = 1.0;
            vectors.push(v);
        }
    }
    Configuration::new(d, vectors)
}

/// The canonical basis of `R^d` with a second copy of `e_1` appended
/// (`N = d + 1`).
pub fn onb_plus(d: usize) -> Result<Configuration> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!(
            "onb_plus needs d >= 2, got {d}"
        )));
    }
    let mut vectors: Vec<Vec<f64>> = (0..d)
        .map(|i| {
            let mut v = vec![0.0; d];
            v[i] = 1.0;
            v
        })
        .collect();
    let mut repeat = vec![0.0; d];
    repeat[0] = 1.0;
    vectors.push(repeat);
    Configuration::new(d, vectors)
}

/// The regular simplex of `n+1` unit vectors in `R^n`; all pairwise inner
/// products equal `-1/n`.
///
/// Built by projecting the canonical basis of `R^{n+1}` onto the orthogonal
/// complement of `(1,..,1)`, normalizing, and rotating that hyperplane onto
/// `R^n` with a Householder reflection.
pub fn simplex(n: usize) -> Result<Configuration> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "simplex needs n >= 2, got {n}"
        )));
    }
    Configuration::new(n, simplex_vectors(n))
}

/// Simplex vectors for any n >= 1 (n = 1 gives the antipodal pair in R^1,
/// needed by the lifted construction).
fn simplex_vectors(n: usize) -> Vec<Vec<f64>> {
    let m = n + 1;
    let inv_m = 1.0 / m as f64;
    let proj_norm = (n as f64 / m as f64).sqrt();
    // Householder vector w = u_hat - e_m maps u_hat = (1,..,1)/sqrt(m) to e_m,
    // so images of vectors orthogonal to u have last coordinate zero.
    let u_hat = 1.0 / (m as f64).sqrt();
    let mut w = vec![u_hat; m];
    w[m - 1] -= 1.0;
    let ww: f64 = w.iter().map(|x| x * x).sum();

    (0..m)
        .map(|i| {
            let mut q: Vec<f64> = (0..m)
                .map(|a| {
                    let e = if a == i { 1.0 } else { 0.0 };
                    (e - inv_m) / proj_norm
                })
                .collect();
            let wq: f64 = w.iter().zip(&q).map(|(a, b)| a * b).sum();
            for a in 0..m {
                q[a] -= 2.0 * wq / ww * w[a];
            }
            q.truncate(n);
            q
        })
        .collect()
}

/// The lifted simplex frame: the `k`-simplex embedded in the first `k`
/// coordinates of `R^d`, padded with the remaining `d - k` canonical basis
/// vectors (`N = d + 1`, `1 <= k <= d`). A two-distance set with inner
/// products `-1/k` and `0`; tight only when `k = d`.
pub fn lifted_etf(d: usize, k: usize) -> Result<Configuration> {
    if d < 2 || k < 1 || k > d {
        return Err(Error::InvalidParameter(format!(
            "lifted_etf needs d >= 2 and 1 <= k <= d, got d = {d}, k = {k}"
        )));
    }
    let mut vectors = Vec::with_capacity(d + 1);
    for small in simplex_vectors(k) {
        let mut v = vec![0.0; d];
        v[..k].copy_from_slice(&small);
        vectors.push(v);
    }
    for i in k..d {
        let mut v = vec![0.0; d];
        v[i] = 1.0;
        vectors.push(v);
    }
    Configuration::new(d, vectors)
}

/// Concatenation of `X` and `-X` (`2N` vectors). Requires coherence < 1:
/// repeated or antipodal vectors would collapse under sign identification.
pub fn symmetrize(config: &Configuration) -> Result<Configuration> {
    let coherence = potentials::coherence(config);
    if coherence >= 1.0 - 1e-12 {
        return Err(Error::CoherenceOne);
    }
    let mut vectors = config.vectors().to_vec();
    vectors.extend(
        config
            .vectors()
            .iter()
            .map(|v| v.iter().map(|x| -x).collect::<Vec<f64>>()),
    );
    Configuration::new(config.dim(), vectors)
}

/// `N` i.i.d. uniform points on `S^{d-1}`: standard Gaussian samples,
/// normalized. PRNG is ChaCha8 seeded with `seed`; results are reproducible
/// bit for bit across runs and platforms.
pub fn random_uniform(n: usize, d: usize, seed: u64) -> Result<Configuration> {
    if n < 2 || d < 2 {
        return Err(Error::InvalidParameter(format!(
            "random_uniform needs N >= 2 and d >= 2, got N = {n}, d = {d}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(random_on_sphere(n, d, &mut rng))
}

/// Uniform points from an existing stream; used by the optimizer's restarts.
pub(crate) fn random_on_sphere(n: usize, d: usize, rng: &mut ChaCha8Rng) -> Configuration {
    let mut vectors = Vec::with_capacity(n);
    while vectors.len() < n {
        let v: Vec<f64> = (0..d)
            .map(|_| rng.sample::<f64, _>(StandardNormal))
            .collect();
        let norm = crate::config::norm(&v);
        if norm < 1e-8 {
            continue; // essentially impossible, but keeps the map total
        }
        vectors.push(v.iter().map(|x| x / norm).collect());
    }
    Configuration::new(d, vectors).expect("normalized gaussian vectors are unit")
}
