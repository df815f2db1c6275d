//! Helpers shared by unit tests: random elements of the equivalence group.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::config::Configuration;

/// Random orthogonal matrix via Gram-Schmidt on a Gaussian matrix.
pub fn random_orthogonal(d: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    loop {
        let mut rows: Vec<Vec<f64>> = (0..d)
            .map(|_| {
                (0..d)
                    .map(|_| rng.sample::<f64, _>(StandardNormal))
                    .collect()
            })
            .collect();
        let mut ok = true;
        for i in 0..d {
            for j in 0..i {
                let proj: f64 = rows[i].iter().zip(&rows[j]).map(|(a, b)| a * b).sum();
                for k in 0..d {
                    rows[i][k] -= proj * rows[j][k];
                }
            }
            let norm: f64 = rows[i].iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm < 1e-8 {
                ok = false;
                break;
            }
            for k in 0..d {
                rows[i][k] /= norm;
            }
        }
        if ok {
            return rows;
        }
    }
}

pub fn apply_orthogonal(config: &Configuration, q: &[Vec<f64>]) -> Configuration {
    let d = config.dim();
    let vectors = config
        .vectors()
        .iter()
        .map(|v| {
            (0..d)
                .map(|r| q[r].iter().zip(v).map(|(a, b)| a * b).sum())
                .collect()
        })
        .collect();
    Configuration::new(d, vectors).expect("orthogonal image stays unit norm")
}

/// Random permutation plus per-vector sign flips.
pub fn shuffle_and_flip(config: &Configuration, rng: &mut ChaCha8Rng) -> Configuration {
    let mut vectors = config.vectors().to_vec();
    vectors.shuffle(rng);
    for v in &mut vectors {
        if rng.random::<bool>() {
            for x in v.iter_mut() {
                *x = -*x;
            }
        }
    }
    Configuration::new(config.dim(), vectors).expect("group action preserves validity")
}
