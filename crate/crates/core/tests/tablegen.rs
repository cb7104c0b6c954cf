use chitbl_core::chebkit::{passes_tail, TAIL_FACTOR};
use chitbl_core::legendre_eig::chi_integer;
use chitbl_core::phasekit::riccati_probe;
use chitbl_core::tablegen::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::OnceLock;

fn chi(n: usize, gamma: f64) -> f64 {
    chi_integer(n, gamma).unwrap().chi
}

fn g256() -> &'static GModel {
    static G: OnceLock<GModel> = OnceLock::new();
    G.get_or_init(|| build_g_model(256.0).unwrap())
}

fn node(gamma: f64) -> &'static NodeExpansionSet {
    static N256: OnceLock<NodeExpansionSet> = OnceLock::new();
    static N1024: OnceLock<NodeExpansionSet> = OnceLock::new();
    let cell = match gamma {
        256.0 => &N256,
        1024.0 => &N1024,
        _ => unreachable!(),
    };
    cell.get_or_init(|| build_node_set(gamma).unwrap())
}

#[test]
fn forward_model_hits_the_integer_anchors() {
    let g = g256();
    assert_eq!(g.n_top, 282);
    assert!(g.model.eval(g.chi_lo).unwrap().abs() <= 1e-9);
    assert!((g.model.eval(g.chi_hi).unwrap() - 282.0).abs() <= 1e-9);
    for p in g.model.pieces() {
        assert!(passes_tail(&p.coeffs, TAIL_FACTOR));
    }
    let v = g.model.eval(0.5 * (chi(3, 256.0) + chi(4, 256.0))).unwrap();
    assert!(v > 3.0 && v < 4.0, "{v}");
}

#[test]
fn inverse_round_trips_through_the_forward_model() {
    let g = g256();
    let f = invert_to_f(g).unwrap();
    for p in f.pieces() {
        assert!(passes_tail(&p.coeffs, TAIL_FACTOR));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..500 {
        let sigma = rng.gen_range(0.0..=SIGMA_MAX);
        let back = g.model.eval(f.eval(sigma).unwrap()).unwrap();
        assert!((back - 256.0 * sigma).abs() <= 5e-13 * 256.0, "sigma={sigma}: {back}");
    }
}

#[test]
fn chi_model_reproduces_integer_eigenvalues() {
    let set = node(1024.0);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..20 {
        let n = rng.gen_range(0..=1126usize);
        let want = chi(n, 1024.0);
        let got = set.chi_model.eval(n as f64 / 1024.0).unwrap();
        assert!((got - want).abs() <= 1e-12 * want, "n={n}: {got} vs {want}");
    }
    let mut prev = f64::NEG_INFINITY;
    for j in 0..=5000 {
        let v = set.chi_model.eval(SIGMA_MAX * j as f64 / 5000.0).unwrap();
        assert!(v > prev);
        prev = v;
    }
}

#[test]
fn derivative_models_match_a_direct_probe() {
    let set = node(256.0);
    let p = riccati_probe(chi(100, 256.0), 256.0).unwrap();
    let d1 = set.d1_model.eval(100.0 / 256.0).unwrap() * 256.0;
    assert!((d1 - p.psi1).abs() <= 1e-11 * p.psi1, "{d1} vs {}", p.psi1);
    for m in set.models() {
        assert_eq!(m.domain(), (0.0, SIGMA_MAX));
        assert_eq!(m.k(), K);
    }
}

#[test]
fn chi_model_bends_near_two_over_pi() {
    let f = &node(1024.0).chi_model;
    let h = 1e-3;
    let d2 = |s: f64| f.eval(s + h).unwrap() - 2.0 * f.eval(s).unwrap() + f.eval(s - h).unwrap();
    let mut changes = Vec::new();
    let mut s = 0.2;
    while s < 1.05 {
        if d2(s) < 0.0 && d2(s + h) >= 0.0 {
            changes.push(s);
        }
        s += h;
    }
    assert_eq!(changes.len(), 1, "{changes:?}");
    let two_over_pi = 2.0 / core::f64::consts::PI;
    assert!((changes[0] - two_over_pi).abs() <= 0.05, "{changes:?}");
}

#[test]
fn panels_tile_the_gamma_range() {
    let mut prev = 64.0;
    for l in 1..=L_MAX {
        let p = GammaPanel::new(l).unwrap();
        assert_eq!(p.a, prev);
        assert_eq!(p.b, 4.0 * p.a);
        assert_eq!(p.gamma_nodes.len(), K);
        assert_eq!(p.gamma_nodes[0], p.a);
        assert_eq!(p.gamma_nodes[K - 1], p.b);
        prev = p.b;
    }
    assert_eq!(prev, 1048576.0);
    assert!(check_panel_range(0, 3).is_err());
    assert!(check_panel_range(3, 2).is_err());
    assert!(check_panel_range(1, 8).is_err());
}
