use std::sync::Arc;

use chowmot::catalog::{grassmannian, hirzebruch, projective_bundle_model, projective_space};
use chowmot::correspondence::{compose, diagonal};
use chowmot::fibration::{
    build_projector_family, pullback, pushforward, recover_leading_component, trivial_fibration, FibrationModel,
    YCycle,
};
use chowmot::matrix::Matrix;
use chowmot::murre::{cellular_ck, frak_p, lift_ck, CKDecomposition};
use chowmot::random::{random_correspondence, random_cycle, random_ycycle, rng};
use chowmot::ring::Cycle;
use chowmot::Error;
use proptest::prelude::*;
use rand::Rng;

fn models() -> Vec<Arc<FibrationModel>> {
    let p2 = projective_space(2);
    let h = Cycle::from_labels(&p2, &[("h", 1)]).unwrap();
    let zero = Cycle::zero(&p2, h.mode());
    vec![
        trivial_fibration(&projective_space(1), &projective_space(2)).unwrap(),
        trivial_fibration(&projective_space(2), &grassmannian(2, 4).unwrap()).unwrap(),
        hirzebruch(0).unwrap(),
        hirzebruch(1).unwrap(),
        hirzebruch(3).unwrap(),
        projective_bundle_model(&p2, &[h, zero]).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn projectors_pick_out_generator_components(seed in any::<u64>(), which in 0usize..6) {
        let m = &models()[which];
        let family = build_projector_family(m).unwrap();
        let mut r = rng(seed);
        let p = r.gen_range(0..=m.dimension());
        let y = random_ycycle(m, Some(p), 10, &mut r);
        for &(i, j) in family.order() {
            let g = m.generator((i, j)).unwrap();
            let expected = if i <= p {
                YCycle::from_components(m, &[(g, y.component(g))]).unwrap()
            } else {
                YCycle::zero(m)
            };
            prop_assert_eq!(y.apply(family.operator((i, j))), expected);
        }
    }

    #[test]
    fn leading_components_are_recovered_one_at_a_time(seed in any::<u64>(), which in 0usize..6) {
        let m = &models()[which];
        let mut y = random_ycycle(m, None, 10, &mut rng(seed));
        let mut steps = 0;
        while let Some((idx, c)) = recover_leading_component(&y).unwrap() {
            let g = m.generator(idx).unwrap();
            prop_assert_eq!(&c, &y.component(g));
            let neg = c.scale(&chowmot::matrix::q(-1));
            y = y.add(&YCycle::from_components(m, &[(g, neg)]).unwrap());
            steps += 1;
            prop_assert!(steps <= m.fiber().len());
        }
        prop_assert!(y.is_zero());
    }

    #[test]
    fn y_ring_axioms_and_projection_formula(seed in any::<u64>(), which in 0usize..6) {
        let m = &models()[which];
        let mut r = rng(seed);
        let (a, b, c) =
            (random_ycycle(m, None, 5, &mut r), random_ycycle(m, None, 5, &mut r), random_ycycle(m, None, 5, &mut r));
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        let alpha = random_cycle(m.base(), None, 5, &mut r);
        let lhs = pushforward(m, &pullback(m, &alpha).unwrap().mul(&a).unwrap()).unwrap();
        let rhs = alpha.mul(&pushforward(m, &a).unwrap()).unwrap();
        prop_assert_eq!(lhs.to_rational(), rhs.to_rational());
    }

    #[test]
    fn frak_p_is_additive_and_multiplicative(seed in any::<u64>(), which in 0usize..6) {
        let m = &models()[which];
        let x = m.base();
        let mut r = rng(seed);
        let phi = random_correspondence(x, x, 0, 5, &mut r);
        let psi = random_correspondence(x, x, 0, 5, &mut r);
        let sum = phi.add(&psi).unwrap();
        let comp = compose(&psi, &phi).unwrap();
        for j in 0..=2 * m.fiber_dim() {
            let (a, b) = (frak_p(m, &phi, j).unwrap(), frak_p(m, &psi, j).unwrap());
            prop_assert!(frak_p(m, &sum, j).unwrap() == &a + &b);
            prop_assert!(frak_p(m, &comp, j).unwrap() == &b * &a);
            for k in (0..=2 * m.fiber_dim()).filter(|&k| k != j) {
                prop_assert!((&frak_p(m, &psi, k).unwrap() * &a).is_zero());
            }
        }
    }
}

#[test]
fn frak_p_of_the_diagonal_sums_to_the_identity() {
    for m in models() {
        let delta = diagonal(m.base()).unwrap();
        let total = (0..=2 * m.fiber_dim())
            .map(|j| frak_p(&m, &delta, j).unwrap())
            .fold(Matrix::zeros(m.len(), m.len()), |acc, op| &acc + &op);
        assert!(total.is_identity(), "{}", m.name());
        for j in (1..=2 * m.fiber_dim()).step_by(2) {
            assert!(frak_p(&m, &delta, j).unwrap().is_zero());
        }
    }
}

#[test]
fn lift_rejects_a_base_without_the_window_property() {
    let m = hirzebruch(1).unwrap();
    let base = cellular_ck(m.base()).unwrap();
    let mut cycles = base.cycles().unwrap().to_vec();
    cycles.swap(0, 2);
    let swapped = CKDecomposition::from_cycles(m.base(), cycles).unwrap();
    assert!(matches!(lift_ck(&m, &swapped), Err(Error::Hypothesis(_))));
}

#[test]
fn lift_rejects_a_foreign_base() {
    let m = hirzebruch(1).unwrap();
    let other = cellular_ck(&projective_space(2)).unwrap();
    assert!(lift_ck(&m, &other).is_err());
}

#[test]
fn lifted_projectors_sum_to_the_identity() {
    for m in models() {
        let lifted = lift_ck(&m, &cellular_ck(m.base()).unwrap()).unwrap();
        assert!(lifted.plan.is_partition());
        let total = lifted.ck.operators().iter().fold(Matrix::zeros(m.len(), m.len()), |acc, op| &acc + op);
        assert!(total.is_identity(), "{}", m.name());
        assert_eq!(lifted.ck.ranks().iter().sum::<usize>(), m.len());
    }
}
