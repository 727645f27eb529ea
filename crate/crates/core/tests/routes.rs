//! Cross-module checks: sequential and parallel execution agree, the
//! class-compressed route agrees with dense tables, and serialized artefacts
//! survive a round trip.

use heilbronn_core::arith::{primes_in_range, Prime};
use heilbronn_core::exec;
use heilbronn_core::fermat::lp_scan;
use heilbronn_core::group::build_gamma;
use heilbronn_core::heilbronn::{scan_bounds, DEFAULT_SCAN_CAP};
use heilbronn_core::spectral::invariant::{gamma_higher_energy, gamma_iterated, gamma_t_k, psi_k, LabelMap};
use heilbronn_core::spectral::{higher_energy, iterated_convolution, t_k, ResidueSet};
use heilbronn_core::stepanov::{build_certificate, verify_difference_lemma, Certificate, MCell, Params};
use proptest::prelude::*;

fn gamma_set(p: Prime) -> ResidueSet {
    ResidueSet::new(p.square(), build_gamma(p).elements().iter().copied()).unwrap()
}

#[test]
fn sequential_and_parallel_agree() {
    for q in [11u64, 101, 211] {
        let p = Prime::new(q).unwrap();
        let par = scan_bounds(p, DEFAULT_SCAN_CAP).unwrap();
        let seq = exec::sequential(|| scan_bounds(p, DEFAULT_SCAN_CAP).unwrap());
        assert_eq!(par, seq, "p={q}");
    }
    let p = Prime::new(13).unwrap();
    let par = verify_difference_lemma(p, Some(10), 3).unwrap();
    let seq = exec::sequential(|| verify_difference_lemma(p, Some(10), 3).unwrap());
    assert_eq!(par, seq);
    assert_eq!(lp_scan(3, 5000).unwrap(), exec::sequential(|| lp_scan(3, 5000).unwrap()));
}

#[test]
fn class_route_matches_dense_route() {
    for p in primes_in_range(3, 23) {
        let map = LabelMap::new(p).unwrap();
        let set = gamma_set(p);
        for k in 2..=3 {
            assert_eq!(gamma_higher_energy(&map, k).unwrap(), higher_energy(&set, &set, k).unwrap());
            assert_eq!(gamma_t_k(&map, k).unwrap(), t_k(&set, k).unwrap());
            let dense = iterated_convolution(&set, k).unwrap();
            assert!(gamma_iterated(&map, k).unwrap().matches_dense(&dense, &map), "p={p} d={k}");
        }
    }
}

#[test]
fn psi_tables_are_gamma_invariant() {
    for p in primes_in_range(3, 13) {
        let n = p.square();
        let g = build_gamma(p);
        for k in 1..=2 {
            let psi = psi_k(p, k).unwrap();
            for x in 0..n {
                for &h in g.elements() {
                    assert_eq!(psi.get(x), psi.get(x * h % n));
                }
            }
        }
    }
}

#[test]
fn certificate_json_round_trip() {
    let p = Prime::new(101).unwrap();
    let cells = [MCell::new(p, 1, 2, 1).unwrap()];
    let cert = build_certificate(p, &cells, Params::new(10, 5, 2, 3)).unwrap();
    let text = serde_json::to_string(&cert).unwrap();
    let back: Certificate = serde_json::from_str(&text).unwrap();
    assert_eq!(back, cert);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn t2_routes_agree(idx in 0usize..12) {
        let p = primes_in_range(3, 41)[idx];
        let map = LabelMap::new(p).unwrap();
        let set = gamma_set(p);
        prop_assert_eq!(gamma_t_k(&map, 2).unwrap(), t_k(&set, 2).unwrap());
    }
}
