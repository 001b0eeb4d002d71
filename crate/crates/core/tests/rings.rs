use std::collections::BTreeMap;
use std::sync::Arc;

use chowmot::catalog::{grassmannian, pieri, projective_space, schubert};
use chowmot::random::{random_cycle, rng};
use chowmot::ring::{kunneth_product, verify_pairing, ChowRing, Cycle};
use proptest::prelude::*;

fn rings() -> Vec<Arc<ChowRing>> {
    vec![
        projective_space(1),
        projective_space(3),
        grassmannian(2, 4).unwrap(),
        grassmannian(2, 5).unwrap(),
        kunneth_product(&projective_space(1), &projective_space(2)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multiplication_is_associative_and_commutative(seed in any::<u64>(), which in 0usize..5) {
        let ring = &rings()[which];
        let mut r = rng(seed);
        let (a, b, c) = (
            random_cycle(ring, None, 6, &mut r),
            random_cycle(ring, None, 6, &mut r),
            random_cycle(ring, None, 6, &mut r),
        );
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(a.mul(&Cycle::unit(ring)).unwrap(), a);
    }

    #[test]
    fn degree_is_linear(seed in any::<u64>(), which in 0usize..5) {
        let ring = &rings()[which];
        let mut r = rng(seed);
        let (a, b) = (random_cycle(ring, None, 6, &mut r), random_cycle(ring, None, 6, &mut r));
        prop_assert_eq!(a.add(&b).unwrap().degree(), a.degree() + b.degree());
    }
}

#[test]
fn ranks_are_palindromic() {
    for ring in rings() {
        let ranks = ring.ranks();
        let rev: Vec<_> = ranks.iter().rev().copied().collect();
        assert_eq!(ranks, rev, "{}", ring.name());
        assert!(verify_pairing(&ring).passed());
    }
}

#[test]
fn grassmannian_ranks() {
    assert_eq!(grassmannian(2, 4).unwrap().ranks(), vec![1, 1, 2, 1, 1]);
    assert_eq!(grassmannian(2, 5).unwrap().ranks(), vec![1, 1, 2, 2, 2, 1, 1]);
    assert!(grassmannian(3, 12).is_err());
}

#[test]
fn lr_and_pieri_agree_with_the_ring_table() {
    for (k, n) in [(2, 4), (2, 5), (2, 6), (3, 5)] {
        let ring = grassmannian(k, n).unwrap();
        let parts: Vec<_> = (0..=k * (n - k)).flat_map(|s| schubert::partitions_in_box(k, n - k, s)).collect();
        for a in &parts {
            for b in &parts {
                let lr = schubert::schubert_product(k, n, a, b);
                let oracle = pieri::product(k, n, a, b);
                let lr_signed: BTreeMap<_, i64> = lr.iter().map(|(p, c)| (p.clone(), *c as i64)).collect();
                assert_eq!(lr_signed, oracle, "Gr({k},{n}) {a:?}·{b:?}");
                let x = Cycle::from_labels(&ring, &[(&schubert::label(a), 1)]).unwrap();
                let y = Cycle::from_labels(&ring, &[(&schubert::label(b), 1)]).unwrap();
                let terms: Vec<_> = lr.iter().map(|(p, c)| (schubert::label(p), *c as i64)).collect();
                let refs: Vec<_> = terms.iter().map(|(l, c)| (l.as_str(), *c)).collect();
                assert_eq!(x.mul(&y).unwrap(), Cycle::from_labels(&ring, &refs).unwrap());
            }
        }
    }
}

#[test]
fn point_class_has_degree_one() {
    for ring in rings() {
        assert_eq!(Cycle::point(&ring).degree(), chowmot::matrix::q(1));
    }
}
