//! Energy functionals: the p-frame potential, coherence, general kernels of
//! squared inner products or squared chordal distances, and the discrete
//! probabilistic potential.
//!
//! Every energy is a sum over ordered pairs `(i, j)`, `i != j`, evaluated row
//! by row in index order so results are reproducible.

use serde::{Deserialize, Serialize};

use crate::config::{dot, Configuration};
use crate::{Error, Result};

/// Contributions below this threshold are flushed to zero: they sit under
/// representable tolerance and only add underflow noise.
pub const UNDERFLOW_FLUSH: f64 = 1e-300;

/// Exponent of a p-frame potential; `Infinity` selects the coherence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PExponent {
    Finite(f64),
    Infinity,
}

impl PExponent {
    /// Parses a CLI-style exponent; accepts `inf` (any case) for infinity.
    pub fn parse(text: &str) -> Result<Self> {
        if text.eq_ignore_ascii_case("inf") || text.eq_ignore_ascii_case("infinity") {
            return Ok(PExponent::Infinity);
        }
        let p: f64 = text
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("cannot parse exponent '{text}'")))?;
        if !p.is_finite() || p <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "exponent must be positive, got {p}"
            )));
        }
        Ok(PExponent::Finite(p))
    }
}

/// An energy kernel.
pub enum KernelSpec<'a> {
    /// `|<x_i,x_j>|^p`, or the coherence at `p = Infinity`.
    PFrame(PExponent),
    /// `g(|<x_i,x_j>|^2)` with `g` defined on `[0, 1)`.
    InnerSquare(&'a dyn Fn(f64) -> f64),
    /// `f(|x_i - x_j|^2)` with `f` defined on `(0, 4 r^2]` for points on a
    /// sphere or circle of radius `r`.
    Chordal {
        f: &'a dyn Fn(f64) -> f64,
        radius: f64,
    },
}

impl KernelSpec<'_> {
    fn describe(&self) -> KernelDescriptor {
        match self {
            KernelSpec::PFrame(p) => KernelDescriptor::PFrame(*p),
            KernelSpec::InnerSquare(_) => KernelDescriptor::InnerSquare,
            KernelSpec::Chordal { radius, .. } => KernelDescriptor::Chordal { radius: *radius },
        }
    }
}

/// Plain record of which kernel produced an energy value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum KernelDescriptor {
    PFrame(PExponent),
    InnerSquare,
    Chordal { radius: f64 },
}

/// An evaluated energy together with the kernel that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyValue {
    pub value: f64,
    pub kernel: KernelDescriptor,
}

/// The p-frame potential: sum of `|<x_i,x_j>|^p` over ordered pairs `i != j`
/// (twice the unordered sum). Requires finite `p > 0`.
pub fn fp_eval(config: &Configuration, p: f64) -> Result<EnergyValue> {
    if !p.is_finite() || p <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "fp_eval needs p > 0, got {p}"
        )));
    }
    let value = fp_value(config.vectors(), p);
    Ok(EnergyValue {
        value,
        kernel: KernelDescriptor::PFrame(PExponent::Finite(p)),
    })
}

/// Raw ordered-pair sum on plain vectors; shared with the optimizer, which
/// works on iterates that are not wrapped in `Configuration`.
pub(crate) fn fp_value(vectors: &[Vec<f64>], p: f64) -> f64 {
    let n = vectors.len();
    let mut total = 0.0;
    for i in 0..n {
        let mut row = 0.0;
        for j in 0..n {
            if i == j {
                continue;
            }
            let term = dot(&vectors[i], &vectors[j]).abs().powf(p);
            if term >= UNDERFLOW_FLUSH {
                row += term;
            }
        }
        total += row;
    }
    total
}

/// Largest absolute inner product between distinct vectors, clamped to [0, 1].
pub fn coherence(config: &Configuration) -> f64 {
    let n = config.len();
    let mut max = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            max = max.max(dot(config.vector(i), config.vector(j)).abs());
        }
    }
    max.min(1.0)
}

/// Ordered-pair energy for an arbitrary kernel. Errors when a pairwise value
/// leaves the kernel's domain (for example coincident points under a chordal
/// kernel with a singularity at zero distance).
pub fn kernel_energy(config: &Configuration, kernel: &KernelSpec) -> Result<EnergyValue> {
    let descriptor = kernel.describe();
    let n = config.len();
    let value = match kernel {
        KernelSpec::PFrame(PExponent::Finite(p)) => return fp_eval(config, *p),
        KernelSpec::PFrame(PExponent::Infinity) => coherence(config),
        KernelSpec::InnerSquare(g) => {
            let mut total = 0.0;
            for i in 0..n {
                let mut row = 0.0;
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    let t = dot(config.vector(i), config.vector(j));
                    let s = (t * t).min(1.0 + 1e-12);
                    if s >= 1.0 {
                        return Err(Error::KernelDomain { i, j, value: s });
                    }
                    row += g(s);
                }
                total += row;
            }
            total
        }
        KernelSpec::Chordal { f, radius } => {
            let upper = 4.0 * radius * radius;
            let mut total = 0.0;
            for i in 0..n {
                let mut row = 0.0;
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    let t = dot(config.vector(i), config.vector(j));
                    let dist2 = (2.0 - 2.0 * t).max(0.0);
                    if dist2 <= 0.0 || dist2 > upper + 1e-12 {
                        return Err(Error::KernelDomain { i, j, value: dist2 });
                    }
                    row += f(dist2.min(upper));
                }
                total += row;
            }
            total
        }
    };
    Ok(EnergyValue {
        value,
        kernel: descriptor,
    })
}

/// Probabilistic p-frame potential of the normalized counting measure:
/// `(FP_p(X) + N) / N^2`.
pub fn pfp_discrete(config: &Configuration, p: f64) -> Result<f64> {
    let n = config.len() as f64;
    let fp = fp_eval(config, p)?.value;
    Ok((fp + n) / (n * n))
}
