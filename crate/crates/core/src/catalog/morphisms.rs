//! Morphism data between catalog rings, as pullback/pushforward matrix pairs.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Pow;

use crate::correspondence::MorphismData;
use crate::matrix::{q, Matrix};
use crate::ring::{kunneth_product, ChowRing};

fn rat(v: BigInt) -> BigRational {
    BigRational::from_integer(v)
}

/// `X → point`: `f^∗ 1 = 1`, `f_∗ pt = 1`.
pub fn constant_to_point(x: &Arc<ChowRing>) -> MorphismData {
    let pt = super::projective_space(0);
    let mut pull = Matrix::zeros(x.len(), 1);
    pull.set(x.unit_cell(), 0, q(1));
    let mut push = Matrix::zeros(1, x.len());
    push.set(0, x.point_cell(), q(1));
    MorphismData::new(format!("{}→point", x.name()), x.clone(), pt, pull, push).expect("graded")
}

/// A map `X → Y` onto the point `pt_Y`: `f^∗ 1 = 1`, `f_∗ pt_X = pt_Y`.
pub fn constant_map(x: &Arc<ChowRing>, y: &Arc<ChowRing>) -> MorphismData {
    let mut pull = Matrix::zeros(x.len(), y.len());
    pull.set(x.unit_cell(), y.unit_cell(), q(1));
    let mut push = Matrix::zeros(y.len(), x.len());
    push.set(y.point_cell(), x.point_cell(), q(1));
    MorphismData::new(format!("const:{}→{}", x.name(), y.name()), x.clone(), y.clone(), pull, push).expect("graded")
}

/// `A × B → A`: `f^∗ a = a × 1`, `f_∗(a × pt) = a`, other cells push to zero.
pub fn first_projection(a: &Arc<ChowRing>, b: &Arc<ChowRing>) -> MorphismData {
    let prod = kunneth_product(a, b);
    let factors = prod.factors().expect("product ring");
    let mut pull = Matrix::zeros(prod.len(), a.len());
    let mut push = Matrix::zeros(a.len(), prod.len());
    for x in 0..a.len() {
        pull.set(factors.cell(x, b.unit_cell()), x, q(1));
        push.set(x, factors.cell(x, b.point_cell()), q(1));
    }
    MorphismData::new(format!("pr1:{}→{}", prod.name(), a.name()), prod.clone(), a.clone(), pull, push)
        .expect("graded")
}

/// A degree-`e` curve `P^1 → P^n`: `f^∗ h = e·pt`, `f_∗ 1 = e h^{n−1}`, `f_∗ pt = h^n`.
pub fn curve_in_projective_space(p1: &Arc<ChowRing>, pn: &Arc<ChowRing>, e: i64) -> MorphismData {
    let n = pn.dimension();
    assert!(p1.dimension() == 1 && n >= 1, "curve_in_projective_space needs P^1 and P^n with n ≥ 1");
    let mut pull = Matrix::zeros(2, n + 1);
    pull.set(0, 0, q(1));
    pull.set(1, 1, q(e));
    let mut push = Matrix::zeros(n + 1, 2);
    push.set(n - 1, 0, q(e));
    push.set(n, 1, q(1));
    MorphismData::new(format!("deg-{e} curve in {}", pn.name()), p1.clone(), pn.clone(), pull, push).expect("graded")
}

/// The degree-`e` power map `P^n → P^n`: `f^∗ h^k = e^k h^k`, `f_∗ h^k = e^{n−k} h^k`.
pub fn power_map(pn: &Arc<ChowRing>, e: i64) -> MorphismData {
    let n = pn.dimension();
    let base = BigInt::from(e);
    let mut pull = Matrix::zeros(n + 1, n + 1);
    let mut push = Matrix::zeros(n + 1, n + 1);
    for k in 0..=n {
        pull.set(k, k, rat(Pow::pow(&base, k as u32)));
        push.set(k, k, rat(Pow::pow(&base, (n - k) as u32)));
    }
    MorphismData::new(format!("power {e} on {}", pn.name()), pn.clone(), pn.clone(), pull, push).expect("graded")
}

/// A linear embedding `P^m → P^n`: `f^∗ h^k = h^k` for `k ≤ m`, `f_∗ h^k = h^{k+n−m}`.
pub fn linear_embedding(pm: &Arc<ChowRing>, pn: &Arc<ChowRing>) -> MorphismData {
    let (m, n) = (pm.dimension(), pn.dimension());
    assert!(m <= n, "linear_embedding needs m ≤ n");
    let mut pull = Matrix::zeros(m + 1, n + 1);
    let mut push = Matrix::zeros(n + 1, m + 1);
    for k in 0..=m {
        pull.set(k, k, q(1));
        push.set(k + n - m, k, q(1));
    }
    MorphismData::new(format!("{}⊂{}", pm.name(), pn.name()), pm.clone(), pn.clone(), pull, push).expect("graded")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::projective_space;

    #[test]
    fn catalog_morphisms_are_valid() {
        let (p1, p2, p3) = (projective_space(1), projective_space(2), projective_space(3));
        let all = [
            constant_to_point(&p2),
            constant_map(&p2, &p1),
            constant_map(&p1, &p3),
            first_projection(&p1, &p2),
            curve_in_projective_space(&p1, &p2, 3),
            curve_in_projective_space(&p1, &p3, 2),
            power_map(&p2, 2),
            power_map(&p1, -3),
            linear_embedding(&p1, &p3),
            linear_embedding(&p2, &p2),
        ];
        for m in &all {
            assert!(m.violations().is_empty(), "{}: {:?}", m.name, m.violations());
        }
    }
}
