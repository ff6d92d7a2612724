//! Convexity and variational identities tying the Fenchel-Legendre value,
//! the balance point, and the two divergence-based exponents together.

use htg_core::asymptotics::{
    a4_violation_on_points, balance_point, chernoff_exponent, log_mgf_llr, stein_exponent,
};
use htg_core::prob::{enumerate_types, kl_divergence, Distribution};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_distribution(rng: &mut ChaCha8Rng, d: usize) -> Distribution {
    let weights: Vec<f64> = (0..d).map(|_| rng.gen_range(0.05..1.0)).collect();
    Distribution::normalized(weights).unwrap()
}

#[test]
fn log_mgf_is_convex_in_lambda() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xce11);
    for _ in 0..50 {
        let d = 2 + rng.gen_range(0..3usize);
        let p = random_distribution(&mut rng, d);
        let q = random_distribution(&mut rng, d);
        let h = 0.05;
        let mut lambda = -1.0;
        while lambda <= 2.0 {
            let second = log_mgf_llr(&p, &q, lambda - h).unwrap()
                - 2.0 * log_mgf_llr(&p, &q, lambda).unwrap()
                + log_mgf_llr(&p, &q, lambda + h).unwrap();
            assert!(second >= -1e-6 * h * h, "lambda={lambda}: {second}");
            lambda += 0.25;
        }
    }
}

/// For binary alphabets the Chernoff information equals the relative entropy
/// from the balance point to either hypothesis.
#[test]
fn chernoff_variational_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xb1b0);
    for _ in 0..50 {
        let p = Distribution::binary(rng.gen_range(0.1..0.9)).unwrap();
        let mut q1 = rng.gen_range(0.1..0.9);
        if (q1 - p.prob(1)).abs() < 0.05 {
            q1 = (q1 + 0.3).min(0.95);
        }
        let q = Distribution::binary(q1).unwrap();
        if p.prob(1) == q.prob(1) {
            continue;
        }
        let cher = chernoff_exponent(&p, &q, 1e-10).unwrap();
        let nu = balance_point(&p, &q).unwrap();
        let to_p = kl_divergence(&nu, &p).unwrap();
        let to_q = kl_divergence(&nu, &q).unwrap();
        assert!((to_p - to_q).abs() < 1e-8, "balance not balanced");
        assert!((cher - to_p).abs() < 1e-8, "chernoff {cher} vs D(nu||p) {to_p}");
    }
}

#[test]
fn chernoff_is_symmetric() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1234);
    for _ in 0..30 {
        let d = 2 + rng.gen_range(0..3usize);
        let p = random_distribution(&mut rng, d);
        let q = random_distribution(&mut rng, d);
        if p == q {
            continue;
        }
        let pq = chernoff_exponent(&p, &q, 1e-10).unwrap();
        let qp = chernoff_exponent(&q, &p, 1e-10).unwrap();
        assert!((pq - qp).abs() < 1e-8, "{pq} vs {qp}");
    }
}

#[test]
fn stein_dominates_chernoff() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x8e77);
    for _ in 0..100 {
        let d = 2 + rng.gen_range(0..3usize);
        let p = random_distribution(&mut rng, d);
        let q = random_distribution(&mut rng, d);
        if p == q {
            continue;
        }
        let stein = stein_exponent(&p, &q).unwrap();
        let cher = chernoff_exponent(&p, &q, 1e-10).unwrap();
        assert!(
            stein >= cher - 1e-10,
            "stein {stein} below chernoff {cher}"
        );
        if kl_divergence(&p, &q).unwrap() > 1e-3 {
            assert!(stein > cher, "one-sided exponent should be strictly larger");
        }
    }
}

#[test]
fn stein_grows_with_separation() {
    let p = Distribution::binary(0.5).unwrap();
    let mut prev = 0.0;
    for i in 1..=8 {
        let q = Distribution::binary(0.5 + 0.05 * i as f64).unwrap();
        let v = stein_exponent(&p, &q).unwrap();
        assert!(v > prev, "not monotone at q1 = {}", q.prob(1));
        prev = v;
    }
}

/// Ternary-alphabet balance-set scan over the type grid at a fixed
/// resolution: a far-away attack set shows no violation, one hugging the
/// baseline does.
#[test]
fn a4_scan_on_ternary_simplex_grid() {
    let p = Distribution::new(vec![0.6, 0.2, 0.2]).unwrap();
    let qstar = Distribution::new(vec![0.2, 0.4, 0.4]).unwrap();
    let resolution = 20;
    let candidates_near_qstar: Vec<Distribution> = enumerate_types(resolution, 3)
        .unwrap()
        .iter()
        .map(|tv| tv.frequencies())
        .filter(|nu| nu.full_support() && kl_divergence(nu, &qstar).unwrap() < 0.02)
        .collect();
    assert!(!candidates_near_qstar.is_empty());
    assert_eq!(
        a4_violation_on_points(&p, &qstar, &candidates_near_qstar).unwrap(),
        None
    );

    let candidates_near_p: Vec<Distribution> = enumerate_types(resolution, 3)
        .unwrap()
        .iter()
        .map(|tv| tv.frequencies())
        .filter(|nu| nu.full_support() && kl_divergence(nu, &p).unwrap() < 0.02)
        .collect();
    assert!(a4_violation_on_points(&p, &qstar, &candidates_near_p)
        .unwrap()
        .is_some());
}
