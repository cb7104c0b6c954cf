use chitbl_core::chebkit::adaptive_expand;
use chitbl_core::chitab::*;
use chitbl_core::tablegen::{GammaPanel, NodeExpansionSet, K, SIGMA_MAX};
use proptest::prelude::*;
use std::sync::OnceLock;

fn synthetic_panel(l: u32) -> TablePanel {
    let p = GammaPanel::new(l).unwrap();
    let nodes = p
        .gamma_nodes
        .iter()
        .map(|&g| {
            let m = |f: &dyn Fn(f64) -> f64| adaptive_expand(f, 0.0, SIGMA_MAX, K).unwrap();
            NodeExpansionSet {
                gamma: g,
                chi_model: m(&|s| g * (1.0 + 2.0 * g * s) + g * g * s * s * s),
                d1_model: m(&|s| 1.0 + s),
                d2_model: m(&|s| s - 0.5),
                d3_model: m(&|s| libm::exp(-s)),
            }
        })
        .collect();
    TablePanel::new(l, p.a, p.b, nodes).unwrap()
}

fn table() -> &'static ChiTable {
    static T: OnceLock<ChiTable> = OnceLock::new();
    T.get_or_init(|| ChiTable::new(vec![synthetic_panel(1), synthetic_panel(2)]).unwrap())
}

fn bytes() -> &'static [u8] {
    static B: OnceLock<Vec<u8>> = OnceLock::new();
    B.get_or_init(|| encode_table(table()))
}

#[test]
fn domain_is_the_union_of_panels() {
    let t = table();
    assert_eq!(t.gamma_range(), (64.0, 1024.0));
    assert_eq!(t.l_range(), (1, 2));
    assert!(t.eval(&EvalQuery::sigma(64.0, 0.0)).is_ok());
    assert!(t.eval(&EvalQuery::sigma(1024.0, 1.1)).is_ok());
    assert!(matches!(t.eval(&EvalQuery::sigma(63.999, 0.5)), Err(EvalError::GammaOutOfRange { .. })));
    assert!(matches!(t.eval(&EvalQuery::sigma(1024.5, 0.5)), Err(EvalError::GammaOutOfRange { .. })));
    assert!(matches!(t.eval(&EvalQuery::sigma(100.0, 1.1000001)), Err(EvalError::SigmaOutOfRange { .. })));
    assert!(matches!(t.eval(&EvalQuery::sigma(100.0, -0.0001)), Err(EvalError::SigmaOutOfRange { .. })));
    assert!(matches!(t.eval(&EvalQuery::sigma(f64::NAN, 0.5)), Err(EvalError::GammaOutOfRange { .. })));
    assert!(matches!(t.eval(&EvalQuery::sigma(100.0, f64::NAN)), Err(EvalError::SigmaOutOfRange { .. })));
}

#[test]
fn concurrent_reads_match_serial_reads() {
    let t = table();
    let queries: Vec<EvalQuery> = (0..2000)
        .map(|i| {
            let gamma = 64.0 + 960.0 * (i as f64 * 0.618_034).fract();
            EvalQuery::sigma(gamma, 1.1 * (i as f64 * 0.414_213).fract()).with_derivatives()
        })
        .collect();
    let serial: Vec<EvalAnswer> = queries.iter().map(|q| chi_eval(t, q).unwrap()).collect();
    std::thread::scope(|s| {
        let handles: Vec<_> = (0..4)
            .map(|_| s.spawn(|| queries.iter().map(|q| chi_eval(t, q).unwrap()).collect::<Vec<_>>()))
            .collect();
        for h in handles {
            assert_eq!(h.join().unwrap(), serial);
        }
    });
}

proptest! {
    #[test]
    fn truncations_are_rejected(len in 0usize..4096) {
        let b = bytes();
        let len = len.min(b.len() - 1);
        prop_assert!(decode_table(&b[..len]).is_err());
    }

    #[test]
    fn corruption_never_panics(edits in prop::collection::vec((any::<prop::sample::Index>(), any::<u8>()), 1..8),
                              gamma in 64.0f64..=1024.0, sigma in 0.0f64..=1.1) {
        let mut b = bytes().to_vec();
        for (i, v) in edits {
            let i = i.index(b.len());
            b[i] = v;
        }
        if let Ok(t) = decode_table(&b) {
            // a decodable table must still evaluate without panicking
            let _ = t.eval(&EvalQuery::sigma(gamma, sigma).with_derivatives());
            prop_assert_eq!(decode_table(&encode_table(&t)).unwrap(), t);
        }
    }

    #[test]
    fn integer_and_sigma_queries_agree(gamma in 64.0f64..=1024.0, frac in 0.0f64..=1.0) {
        let n = (frac * 1.1 * gamma).floor() as u64;
        let t = table();
        let a = t.eval(&EvalQuery::n(gamma, n)).unwrap();
        let b = t.eval(&EvalQuery::sigma(gamma, (n as f64 / gamma).min(1.1))).unwrap();
        prop_assert_eq!(a.chi.to_bits(), b.chi.to_bits());
    }
}
