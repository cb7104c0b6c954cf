use chitbl_core::legendre_eig::*;
use chitbl_core::EPS0;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn chi(n: usize, gamma: f64) -> f64 {
    chi_integer(n, gamma).unwrap().chi
}

#[test]
fn legendre_limit() {
    for n in 0..=100usize {
        let want = (n * (n + 1)) as f64;
        assert!((chi(n, 0.0) - want).abs() <= 4.0 * EPS0 * want, "n={n}");
    }
}

#[test]
fn increasing_in_n() {
    for gamma in [0.0, 1.0, 64.0, 500.0] {
        let mut prev = -1.0;
        for n in 0..=200 {
            let c = chi(n, gamma);
            assert!(c > prev, "gamma={gamma} n={n}");
            prev = c;
        }
    }
}

#[test]
fn matches_independent_library() {
    // prolate characteristic values (order 0) from an independent implementation
    let cases = [
        (0usize, 10.0, 9.228304297249906),
        (5, 10.0, 89.73926723888567),
        (10, 64.0, 1285.6450858680669),
        (40, 100.0, 7162.933997530809),
        (3, 1.0, 12.514462145094022),
        (0, 64.0, 63.24701133694832),
    ];
    for (n, gamma, want) in cases {
        let got = chi(n, gamma);
        assert!((got - want).abs() <= 1e-12 * want, "n={n} gamma={gamma}: {got} vs {want}");
    }
}

#[test]
fn fixed_large_dimension_agrees() {
    let op = build_operator(10.0, Parity::Even, 400).unwrap();
    let want = eigenvalue_kth(&op, 0).unwrap();
    assert!((chi(0, 10.0) - want).abs() <= 1e-13 * want);
    let op = build_operator(10.0, Parity::Odd, 50).unwrap();
    let want = eigenvalue_kth(&op, 0).unwrap();
    assert!((chi(1, 10.0) - want).abs() <= 1e-13 * want);
}

#[test]
fn doubling_the_dimension_changes_nothing() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let gamma = rng.gen_range(0.0..=4096.0);
        let n = rng.gen_range(0..=(1.1 * gamma) as usize);
        let r = chi_integer(n, gamma).unwrap();
        assert!(r.converged);
        let op = build_operator(gamma, Parity::of(n), 2 * r.dim_used).unwrap();
        let big = eigenvalue_kth(&op, n / 2).unwrap();
        assert!((big - r.chi).abs() <= 4.0 * EPS0 * r.chi.abs(), "n={n} gamma={gamma}: {} vs {big}", r.chi);
    }
}

#[test]
fn leading_suboperator_interlaces() {
    for (gamma, parity) in [(3.0, Parity::Even), (40.0, Parity::Odd), (200.0, Parity::Even)] {
        let dim = 8;
        let op = build_operator(gamma, parity, dim).unwrap();
        let sub = op.leading(dim - 1).unwrap();
        let full: Vec<f64> = (0..dim).map(|i| eigenvalue_kth(&op, i).unwrap()).collect();
        let part: Vec<f64> = (0..dim - 1).map(|i| eigenvalue_kth(&sub, i).unwrap()).collect();
        for i in 0..dim - 1 {
            let tol = 8.0 * EPS0 * full[i + 1].abs();
            assert!(full[i] <= part[i] + tol && part[i] <= full[i + 1] + tol, "gamma={gamma} i={i}");
        }
    }
}

#[test]
fn sturm_count_brackets_each_eigenvalue() {
    let op = build_operator(25.0, Parity::Odd, 30).unwrap();
    for idx in [0, 3, 12, 29] {
        let x = eigenvalue_kth(&op, idx).unwrap();
        let d = 1e-9 * x.abs().max(1.0);
        assert_eq!(op.sturm_count(x + d), idx + 1);
        assert_eq!(op.sturm_count(x - d), idx);
    }
}
