use chitbl_core::chebkit::*;
use chitbl_core::EPS0;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const K: usize = 30;

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

#[test]
fn runge_like_function_is_resolved() {
    let f = |x: f64| 1.0 / (1e-4 + x * x);
    let m = adaptive_expand(f, -1.0, 1.0, K).unwrap();
    assert!(m.pieces().len() > 1);
    assert!(m.all_pieces_pass_tail(TAIL_FACTOR));
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..10_000 {
        let x = rng.gen_range(-1.0..=1.0);
        let want = f(x);
        let got = m.eval(x).unwrap();
        assert!((got - want).abs() <= 5e-13 * want, "x={x} {got} vs {want}");
    }
}

#[test]
fn breakpoints_are_continuous() {
    let f = |x: f64| libm::exp(x) * (libm::sin(12.0 * x) + 3.0);
    let m = adaptive_expand(f, 0.0, 2.0, K).unwrap();
    assert!(m.pieces().len() > 1);
    for w in m.pieces().windows(2) {
        let x = w[0].b;
        let (l, r) = (w[0].eval_unchecked(x), w[1].eval_unchecked(x));
        let scale = max_abs(&w[0].coeffs).max(max_abs(&w[1].coeffs));
        assert!((l - r).abs() <= 100.0 * EPS0 * scale, "at {x}: {l} vs {r}");
    }
}

#[test]
fn stricter_threshold_refines() {
    let f = |x: f64| libm::atan(50.0 * (x - 0.3)) + libm::exp(x) + 2.0;
    let loose = adaptive_expand_try(|x| Ok::<_, ChebError>(f(x)), 0.0, 1.0, K, TAIL_FACTOR).unwrap();
    let strict = adaptive_expand_try(|x| Ok::<_, ChebError>(f(x)), 0.0, 1.0, K, TAIL_FACTOR / 2.0).unwrap();
    assert!(strict.pieces().len() >= loose.pieces().len());
    for b in loose.breakpoints() {
        assert!(strict.breakpoints().contains(b), "{b} missing from the stricter partition");
    }
}

proptest! {
    #[test]
    fn grid_invariants(a in -1e3f64..1e3, w in 1e-3f64..1e3, k in 2usize..64) {
        let b = a + w;
        let g = extrema_grid(a, b, k).unwrap();
        prop_assert_eq!(g.nodes.len(), k);
        prop_assert_eq!(g.nodes[0], a);
        prop_assert_eq!(g.nodes[k - 1], b);
        prop_assert!(g.nodes.windows(2).all(|p| p[0] < p[1]));
        for (j, &x) in g.nodes.iter().enumerate() {
            let want = 0.5 * (a + b) - 0.5 * (b - a) * libm::cos(j as f64 * core::f64::consts::PI / (k - 1) as f64);
            prop_assert!((x - want).abs() <= 4.0 * EPS0 * a.abs().max(b.abs()));
        }
    }

    #[test]
    fn polynomials_round_trip(coeffs in prop::collection::vec(-1.0f64..1.0, 1..K / 2), seed in any::<u64>()) {
        // degree < K/2 leaves the upper half of the coefficients at rounding level
        let p = |x: f64| coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c);
        let g = extrema_grid(-1.0, 2.0, K).unwrap();
        let scale = g.nodes.iter().fold(0.0f64, |s, &x| s.max(p(x).abs())).max(f64::MIN_POSITIVE);
        let m = adaptive_expand_floor(|x| Ok::<_, ChebError>(p(x)), -1.0, 2.0, K, TAIL_FACTOR, scale).unwrap();
        prop_assert_eq!(m.pieces().len(), 1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..1000 {
            let x = rng.gen_range(-1.0..=2.0);
            prop_assert!((m.eval(x).unwrap() - p(x)).abs() <= 10.0 * K as f64 * EPS0 * scale);
        }
    }

    #[test]
    fn clenshaw_matches_barycentric(vals in prop::collection::vec(-10.0f64..10.0, K), xs in prop::collection::vec(0.0f64..=1.0, 20)) {
        let e = ChebExpansion::from_values(0.0, 1.0, &vals).unwrap();
        let g = extrema_grid(0.0, 1.0, K).unwrap();
        let scale = max_abs(&vals);
        for x in xs {
            let c = e.eval(x).unwrap();
            let b = barycentric_extrema(&g.nodes, &vals, x);
            prop_assert!((c - b).abs() <= 10.0 * K as f64 * EPS0 * scale, "{} vs {}", c, b);
        }
        let t = ChebTransform::new(K).unwrap();
        let back = t.coeffs_to_vals(&e.coeffs).unwrap();
        for (a, b) in vals.iter().zip(&back) {
            prop_assert!((a - b).abs() <= 10.0 * K as f64 * EPS0 * scale);
        }
    }

    #[test]
    // the tail rule resolves only to about ten units of rounding, so the
    // samples keep |x f'/f| small
    fn adaptive_pieces_tile_and_pass(freq in 1.0f64..12.0, shift in -1.0f64..1.0) {
        let f = |x: f64| libm::cos(freq * x + shift) + 3.0;
        let m = adaptive_expand(f, 0.0, 1.0, K).unwrap();
        prop_assert_eq!(m.domain(), (0.0, 1.0));
        prop_assert!(m.all_pieces_pass_tail(TAIL_FACTOR));
        for (i, p) in m.pieces().iter().enumerate() {
            prop_assert_eq!(p.a, m.breakpoints()[i]);
            prop_assert_eq!(p.b, m.breakpoints()[i + 1]);
        }
    }
}
