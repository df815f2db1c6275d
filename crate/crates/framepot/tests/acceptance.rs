//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the verified tolerances (visible with `cargo test -- --nocapture`).

use std::time::Instant;

use framepot::bounds::{design_bound, fekete_ratio};
use framepot::certify::{
    certify_half_circle, hermite_interpolant, hermite_quotient, NodeSet, Polynomial,
};
use framepot::config::{canonical_invariant, is_frame};
use framepot::constructions::{half_circle, random_uniform, symmetrize};
use framepot::designs::design_check;
use framepot::optimizer::{
    conjecture_test, fp_gradient, minimize, minimize_coherence, sweep, OptimizerSettings,
};
use framepot::potentials::{fp_eval, pfp_discrete};

fn settings(restarts: usize, seed: u64) -> OptimizerSettings {
    OptimizerSettings {
        restarts,
        seed,
        ..OptimizerSettings::default()
    }
}

#[test]
fn criterion_1_funtf_minimum_at_p2() {
    for (n, d) in [(4usize, 2usize), (5, 3), (7, 4)] {
        let started = Instant::now();
        let result = minimize(n, d, 2.0, &settings(50, 1)).unwrap();
        let elapsed = started.elapsed();
        let expected = (n * n) as f64 / d as f64 - n as f64;
        assert!(
            (result.best_value - expected).abs() < 1e-6,
            "(N,d) = ({n},{d}): {} vs {expected}",
            result.best_value
        );
        assert!(elapsed.as_secs() < 30, "(N,d) = ({n},{d}) took {elapsed:?}");
    }
    println!("criterion 1 PASS: p=2 minima reach N^2/d - N within 1e-6 for (4,2), (5,3), (7,4)");
}

#[test]
fn criterion_2_even_p_equality_on_the_circle() {
    for (n, p) in [(4usize, 4usize), (5, 4), (5, 6), (6, 6), (6, 8), (6, 10)] {
        let energy = fp_eval(&half_circle(n).unwrap(), p as f64).unwrap().value;
        let bound = design_bound(n, 2, p).unwrap().value;
        assert!(
            (energy - bound).abs() < 1e-10,
            "(N,p) = ({n},{p}): {energy} vs {bound}"
        );
    }
    println!("criterion 2 PASS: half-circle energies equal the design bound within 1e-10");
}

#[test]
fn criterion_3_minimizer_identification_n4() {
    let reference = half_circle(4).unwrap();
    let reference_invariant = canonical_invariant(&reference);
    for (i, p) in [2.5f64, 3.0, 5.0, 10.0].into_iter().enumerate() {
        let result = minimize(4, 2, p, &settings(50, 100 + i as u64)).unwrap();
        let value_ref = fp_eval(&reference, p).unwrap().value;
        assert!(
            (result.best_value - value_ref).abs() < 1e-6,
            "p = {p}: value {} vs {value_ref}",
            result.best_value
        );
        let invariant = canonical_invariant(&result.best_config);
        let diff = invariant.max_abs_diff(&reference_invariant).unwrap();
        assert!(diff < 1e-5, "p = {p}: invariant differs by {diff}");
    }
    println!("criterion 3 PASS: N=4 minimizers match the half-circle for p in {{2.5, 3, 5, 10}}");
}

#[test]
fn criterion_4_conjecture_protocol_d3() {
    let started = Instant::now();
    for k in 1..=3usize {
        let report = conjecture_test(3, k, &settings(1, 40 + k as u64)).unwrap();
        assert_eq!(report.trials, 50);
        assert!(
            report.max_gap <= 1e-9,
            "k = {k}: a trial beat the reference by {}",
            report.max_gap
        );
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 600, "took {elapsed:?}");
    println!(
        "criterion 4 PASS: d=3 conjecture protocol, no trial beats the lifted value by > 1e-9 \
         ({elapsed:.1?} total)"
    );
}

#[test]
fn criterion_5_grassmannian_limits() {
    let etf = minimize_coherence(3, 2, &settings(12, 5)).unwrap();
    assert!(
        (etf.best_value - 0.5).abs() < 1e-4,
        "(3,2): {}",
        etf.best_value
    );
    let grassmann = minimize_coherence(4, 2, &settings(12, 6)).unwrap();
    assert!(
        (grassmann.best_value - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-4,
        "(4,2): {}",
        grassmann.best_value
    );
    println!("criterion 5 PASS: coherence minima 0.5 (3,2) and cos(pi/4) (4,2) within 1e-4");
}

#[test]
fn criterion_6_lp_certificates_close_the_gap() {
    for (n, p) in [(5usize, 6usize), (6, 8)] {
        let run = certify_half_circle(n, p).unwrap();
        assert!(run.certificate.is_valid(), "(N,p) = ({n},{p})");
        assert!(
            (run.achieved - run.certificate.lower_bound).abs() < 1e-8,
            "(N,p) = ({n},{p}): gap {}",
            run.gap
        );
        let bound = design_bound(n, 2, p).unwrap().value;
        assert!(
            (run.certificate.lower_bound - bound).abs() < 1e-8,
            "(N,p) = ({n},{p}): {} vs design bound {bound}",
            run.certificate.lower_bound
        );
    }
    println!("criterion 6 PASS: certificates for (5,6) and (6,8) are valid with gap < 1e-8");
}

#[test]
fn criterion_7_design_checker_strengths() {
    for n in 3..=6usize {
        let full_circle = symmetrize(&half_circle(n).unwrap()).unwrap();
        let report = design_check(&full_circle, 2 * n, 1e-10).unwrap();
        assert_eq!(
            report.max_strength,
            2 * n - 1,
            "2N = {} points: strength {}",
            2 * n,
            report.max_strength
        );
    }
    println!("criterion 7 PASS: 2N full-circle points verify at strength 2N-1 and fail at 2N");
}

#[test]
fn criterion_8_property_suites() {
    let started = Instant::now();

    // Symmetrization identity on 100 random configurations.
    for seed in 0..100u64 {
        let config =
            random_uniform(4 + (seed % 4) as usize, 2 + (seed % 3) as usize, seed).unwrap();
        let sym = symmetrize(&config).unwrap();
        let n = config.len() as f64;
        for p in [0.5, 1.0, 2.0, 3.7] {
            let lhs = fp_eval(&sym, p).unwrap().value;
            let rhs = 4.0 * fp_eval(&config, p).unwrap().value + 2.0 * n;
            assert!(
                (lhs - rhs).abs() < 1e-9,
                "seed {seed}, p {p}: {lhs} vs {rhs}"
            );
        }
    }

    // Gradient against central finite differences at 20 random points.
    for seed in 200..220u64 {
        let config = random_uniform(5, 3, seed).unwrap();
        for p in [1.3, 2.0, 3.7, 6.0] {
            let analytic = fp_gradient(&config, p).unwrap();
            let h = 1e-6;
            for i in 0..config.len() {
                for a in 0..config.dim() {
                    let mut plus = config.vectors().to_vec();
                    plus[i][a] += h;
                    let mut minus = config.vectors().to_vec();
                    minus[i][a] -= h;
                    let plus = raw_fp(&plus, p);
                    let minus = raw_fp(&minus, p);
                    let numeric = (plus - minus) / (2.0 * h);
                    let rel = (analytic[i][a] - numeric).abs() / numeric.abs().max(1e-3);
                    assert!(rel < 1e-5, "seed {seed} p {p} ({i},{a}): rel err {rel}");
                }
            }
        }
    }

    // Minimized values are nonincreasing along a sweep.
    let grid = [1.0, 1.5, 2.0, 2.5, 3.0];
    let swept = sweep(5, 2, &grid, &settings(12, 300), false).unwrap();
    for w in swept.rows.windows(2) {
        assert!(
            w[1].value <= w[0].value + 1e-6,
            "sweep not monotone: {} then {}",
            w[0].value,
            w[1].value
        );
    }

    // Fekete ratios of minimized values are nondecreasing in N.
    let minimized: Vec<(usize, f64)> = (3..=8)
        .map(|n| {
            let value = minimize(n, 2, 1.5, &settings(16, 400 + n as u64))
                .unwrap()
                .best_value;
            (n, value)
        })
        .collect();
    let ratios = fekete_ratio(&minimized);
    for w in ratios.windows(2) {
        assert!(
            w[1] >= w[0] - 1e-6,
            "Fekete ratios decreased: {} then {}",
            w[0],
            w[1]
        );
    }

    // Every minimized configuration is a frame.
    for (n, d) in [(4usize, 2usize), (5, 3)] {
        for p in [0.5, 1.0, 2.0, 4.0] {
            let result = minimize(n, d, p, &settings(8, 500)).unwrap();
            assert!(
                is_frame(&result.best_config, 1e-8),
                "(N,d) = ({n},{d}), p = {p}"
            );
        }
    }

    // Hermite composition identity on random polynomial instances.
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(600);
    for _ in 0..10 {
        let a = Polynomial::new((0..=10).map(|_| rng.random_range(-1.0..1.0)).collect());
        let mut nodes: Vec<f64> = Vec::new();
        while nodes.len() < 4 {
            let t: f64 = rng.random_range(-0.95..0.9);
            if nodes.iter().all(|v| (v - t).abs() > 0.05) {
                nodes.push(t);
            }
        }
        let g1 = NodeSet::doubled(&nodes[..2]).unwrap();
        let g2 = NodeSet::simple(&nodes[2..]).unwrap();
        let left = hermite_interpolant(&a, &g1.product(&g2)).unwrap();
        let q = hermite_quotient(&a, &g1);
        let h_q = hermite_interpolant(&q, &g2).unwrap();
        let right = hermite_interpolant(&a, &g1)
            .unwrap()
            .add(&g1.poly().mul(&h_q));
        for i in 0..50 {
            let t = -1.0 + 2.0 * i as f64 / 49.0;
            assert!((left.eval(t) - right.eval(t)).abs() < 1e-9, "t = {t}");
        }
    }

    // Certificate soundness against 100 random configurations.
    let run = certify_half_circle(5, 6).unwrap();
    assert!(run.certificate.is_valid());
    for seed in 700..800u64 {
        let config = random_uniform(5, 2, seed).unwrap();
        let energy = fp_eval(&config, 6.0).unwrap().value;
        assert!(energy >= run.certificate.lower_bound - 1e-8, "seed {seed}");
    }

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 60, "property suites took {elapsed:?}");
    println!("criterion 8 PASS: property suites hold ({elapsed:.1?} total)");
}

#[test]
fn criterion_9_asymptotics_at_p1() {
    for k in 2..=6usize {
        let n = 2 * k;
        let result = minimize(n, 2, 1.0, &settings(50, 900 + k as u64)).unwrap();
        let expected = (2 * k * (k - 1)) as f64;
        assert!(
            (result.best_value - expected).abs() < 1e-6,
            "k = {k}: {} vs {expected}",
            result.best_value
        );
        if k == 6 {
            // The normalized potential (F + N)/N^2 of the minimizer tends to
            // 1/d; for copies of an orthonormal basis it equals 1/d exactly.
            let ratio = pfp_discrete(&result.best_config, 1.0).unwrap();
            assert!((ratio - 0.5).abs() < 0.03, "k = 6 ratio {ratio}");
        }
    }
    println!("criterion 9 PASS: p=1 minima equal 2k(k-1) within 1e-6; normalized ratio near 1/2");
}

fn raw_fp(vectors: &[Vec<f64>], p: f64) -> f64 {
    let config_free_sum = |vectors: &[Vec<f64>]| {
        let n = vectors.len();
        let mut total = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    let dot: f64 = vectors[i].iter().zip(&vectors[j]).map(|(a, b)| a * b).sum();
                    total += dot.abs().powf(p);
                }
            }
        }
        total
    };
    config_free_sum(vectors)
}

// Keeps the finite-difference oracle honest: it must agree with the library
// evaluation on the unperturbed configuration.
#[test]
fn finite_difference_oracle_matches_library_on_valid_configs() {
    let config = random_uniform(5, 3, 1234).unwrap();
    for p in [1.3, 2.0, 6.0] {
        let a = raw_fp(config.vectors(), p);
        let b = fp_eval(&config, p).unwrap().value;
        assert!((a - b).abs() <= 1e-12 * a.max(1.0));
    }
}
