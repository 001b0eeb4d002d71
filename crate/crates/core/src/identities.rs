//! Seeded batteries for the correspondence identities.
//!
//! Each battery draws random instances, evaluates both sides exactly and
//! counts disagreements.

use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::catalog::projective_space;
use crate::correspondence::{
    act, ambient_act, ambient_action_matrix, compose, diagonal, from_action, graph_from_morphism, multiplication,
    pullback_first, pullback_second, pushforward_first, pushforward_second, transpose, MorphismData,
};
use crate::error::Result;
use crate::matrix::{q, Matrix};
use crate::random::{
    random_correspondence, random_cycle, random_degree, random_morphism, random_small_space, rng, SeededRng,
};
use crate::ring::{external_product, kunneth_product, ChowRing, Cycle};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    /// The identity being checked, written out.
    pub anchor: String,
    pub samples: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl IdentityCheck {
    fn new(name: &str, anchor: &str) -> Self {
        IdentityCheck { name: name.into(), anchor: anchor.into(), samples: 0, failures: 0, first_failure: None }
    }

    fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.samples += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(detail());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.samples > 0 && self.failures == 0
    }
}

/// Coefficient bound used by the batteries.
pub const COEFF_BOUND: i64 = 10;

fn battery_ring(rng: &mut SeededRng) -> Arc<ChowRing> {
    projective_space(rng.gen_range(0..=2))
}

/// The six composition identities over `P^1`, `P^2` morphism data.
pub fn six_identities(seed: u64, samples: usize) -> Result<Vec<IdentityCheck>> {
    let mut r = rng(seed);
    let mut checks = vec![
        IdentityCheck::new("c_alpha after phi", "c_α ∘ φ = (1_X × α) · φ"),
        IdentityCheck::new("psi after c_alpha", "ψ ∘ c_α = (α × 1_Z) · ψ"),
        IdentityCheck::new("c(f) after phi", "c(f) ∘ φ = (id × f)^∗ φ"),
        IdentityCheck::new("c(g)^t after phi", "c(g)^t ∘ φ = (id × g)_∗ φ"),
        IdentityCheck::new("tau after c(f)", "τ ∘ c(f) = (f × id)_∗ τ"),
        IdentityCheck::new("psi after c(f)^t", "ψ ∘ c(f)^t = (f × id)^∗ ψ"),
    ];
    for _ in 0..samples {
        let (x, y, z) = (random_small_space(&mut r), random_small_space(&mut r), random_small_space(&mut r));
        let xy = kunneth_product(&x, &y);
        let yz = kunneth_product(&y, &z);

        // (1) φ: X → Y, α ∈ CH(Y)
        let phi = random_correspondence(&x, &y, random_degree(&x, &y, &mut r), COEFF_BOUND, &mut r);
        let codim = r.gen_range(0..=y.dimension());
        let alpha = random_cycle(&y, Some(codim), COEFF_BOUND, &mut r);
        let lhs = compose(&multiplication(&alpha)?, &phi)?.to_cycle(&xy)?;
        let rhs = phi.to_cycle(&xy)?.mul(&external_product(&Cycle::unit(&x), &alpha, &xy)?)?;
        checks[0].record(lhs == rhs, || format!("{phi:?}, α = {alpha}"));

        // (2) ψ: Y → Z
        let psi = random_correspondence(&y, &z, random_degree(&y, &z, &mut r), COEFF_BOUND, &mut r);
        let lhs = compose(&psi, &multiplication(&alpha)?)?.to_cycle(&yz)?;
        let rhs = psi.to_cycle(&yz)?.mul(&external_product(&alpha, &Cycle::unit(&z), &yz)?)?;
        checks[1].record(lhs == rhs, || format!("{psi:?}, α = {alpha}"));

        // (3) f: X → Y, c(f): Y → X
        let f = random_morphism(&x, &y, &mut r);
        let (cf, cf_t) = graph_from_morphism(&f)?;
        let lhs = compose(&cf, &phi)?;
        let rhs = pullback_second(&phi, &f)?;
        checks[2].record(lhs == rhs, || format!("{} with {phi:?}", f.name));

        // (4) g: Y → Z
        let g = random_morphism(&y, &z, &mut r);
        let (_, cg_t) = graph_from_morphism(&g)?;
        let lhs = compose(&cg_t, &phi)?;
        let rhs = pushforward_second(&phi, &g)?;
        checks[3].record(lhs == rhs, || format!("{} with {phi:?}", g.name));

        // (5) τ: X → Z
        let tau = random_correspondence(&x, &z, random_degree(&x, &z, &mut r), COEFF_BOUND, &mut r);
        let lhs = compose(&tau, &cf)?;
        let rhs = pushforward_first(&tau, &f)?;
        checks[4].record(lhs == rhs, || format!("{} with {tau:?}", f.name));

        // (6) ψ: Y → Z
        let lhs = compose(&psi, &cf_t)?;
        let rhs = pullback_first(&psi, &f)?;
        checks[5].record(lhs == rhs, || format!("{} with {psi:?}", f.name));
    }
    Ok(checks)
}

/// Matrix of `(id_T × f)^∗ : CH(T × Y) → CH(T × X)`.
fn id_times_pullback(t: &Arc<ChowRing>, f: &MorphismData, tx: &Arc<ChowRing>, ty: &Arc<ChowRing>) -> Matrix {
    let (fx, fy) = (tx.factors().expect("product"), ty.factors().expect("product"));
    let mut m = Matrix::zeros(tx.len(), ty.len());
    for s in 0..t.len() {
        for y in 0..f.target.len() {
            for x in 0..f.source.len() {
                m.set(fx.cell(s, x), fy.cell(s, y), f.pullback.get(x, y).clone());
            }
        }
    }
    m
}

/// Matrix of `(id_T × f)_∗ : CH(T × X) → CH(T × Y)`.
fn id_times_pushforward(t: &Arc<ChowRing>, f: &MorphismData, tx: &Arc<ChowRing>, ty: &Arc<ChowRing>) -> Matrix {
    let (fx, fy) = (tx.factors().expect("product"), ty.factors().expect("product"));
    let mut m = Matrix::zeros(ty.len(), tx.len());
    for s in 0..t.len() {
        for x in 0..f.source.len() {
            for y in 0..f.target.len() {
                m.set(fy.cell(s, y), fx.cell(s, x), f.pushforward.get(y, x).clone());
            }
        }
    }
    m
}

/// `c(f)_T = (id_T × f)^∗`, `c(f)^t_T = (id_T × f)_∗`, `(c_α)_T = m_{1_T × α}`.
pub fn functoriality(seed: u64, samples: usize) -> Result<Vec<IdentityCheck>> {
    let mut r = rng(seed);
    let mut checks = vec![
        IdentityCheck::new("c(f)_T", "c(f)_T = (id_T × f)^∗"),
        IdentityCheck::new("c(f)^t_T", "c(f)^t_T = (id_T × f)_∗"),
        IdentityCheck::new("(c_alpha)_T", "(c_α)_T = m_{1_T × α}"),
    ];
    for _ in 0..samples {
        let t = battery_ring(&mut r);
        let (x, y) = (random_small_space(&mut r), random_small_space(&mut r));
        let (tx, ty) = (kunneth_product(&t, &x), kunneth_product(&t, &y));
        let f = random_morphism(&x, &y, &mut r);
        let (cf, cf_t) = graph_from_morphism(&f)?;

        let c = random_cycle(&ty, None, COEFF_BOUND, &mut r);
        let lhs = ambient_act(&cf, &c, &tx)?;
        let rhs = id_times_pullback(&t, &f, &tx, &ty).apply(c.coeffs());
        let matrices = ambient_action_matrix(&cf, &ty, &tx)? == id_times_pullback(&t, &f, &tx, &ty);
        checks[0].record(lhs.coeffs() == rhs.as_slice() && matrices, || format!("T = {}, {}", t.name(), f.name));

        let c = random_cycle(&tx, None, COEFF_BOUND, &mut r);
        let lhs = ambient_act(&cf_t, &c, &ty)?;
        let rhs = id_times_pushforward(&t, &f, &tx, &ty).apply(c.coeffs());
        let matrices = ambient_action_matrix(&cf_t, &tx, &ty)? == id_times_pushforward(&t, &f, &tx, &ty);
        checks[1].record(lhs.coeffs() == rhs.as_slice() && matrices, || format!("T = {}, {}", t.name(), f.name));

        let codim = r.gen_range(0..=x.dimension());
        let alpha = random_cycle(&x, Some(codim), COEFF_BOUND, &mut r);
        let lhs = ambient_act(&multiplication(&alpha)?, &c, &tx)?;
        let rhs = c.mul(&external_product(&Cycle::unit(&t), &alpha, &tx)?)?;
        checks[2].record(lhs == rhs, || format!("T = {}, α = {alpha}", t.name()));
    }
    Ok(checks)
}

/// `I = 0` iff `I_T = 0` for every `T` in the battery.
pub fn cancellation(seed: u64, samples: usize, battery: &[Arc<ChowRing>]) -> Result<IdentityCheck> {
    let mut r = rng(seed);
    let mut check = IdentityCheck::new("cancellation", "I = 0 ⇔ I_T = 0 for all T in the battery");
    for _ in 0..samples {
        let (x, y) = (random_small_space(&mut r), random_small_space(&mut r));
        let deg = random_degree(&x, &y, &mut r);
        let mut i = random_correspondence(&x, &y, deg, COEFF_BOUND, &mut r);
        if r.gen_bool(0.3) {
            i = i.scale(&q(0));
        }
        let mut all_zero = true;
        for t in battery {
            let (tx, ty) = (kunneth_product(t, &x), kunneth_product(t, &y));
            all_zero &= ambient_action_matrix(&i, &tx, &ty)?.is_zero();
        }
        check.record(i.is_zero() == all_zero, || format!("{i:?}"));
    }
    Ok(check)
}

/// Triple-pushforward composition against the composed action matrices.
pub fn oracle_equivalence(
    rings: &[Arc<ChowRing>],
    seed: u64,
    samples_per_pair: usize,
) -> Result<Vec<IdentityCheck>> {
    let mut r = rng(seed);
    let mut checks = Vec::new();
    for a in rings {
        for b in rings {
            let mut check = IdentityCheck::new(
                &format!("oracle {}→{}", a.name(), b.name()),
                "π_13∗(π_12^∗ f · π_23^∗ g) = contraction of M(g) M(f)",
            );
            for _ in 0..samples_per_pair {
                let c = &rings[r.gen_range(0..rings.len())];
                let f = random_correspondence(a, b, random_degree(a, b, &mut r), COEFF_BOUND, &mut r);
                let g = random_correspondence(b, c, random_degree(b, c, &mut r), COEFF_BOUND, &mut r);
                let direct = compose(&g, &f)?;
                let oracle = from_action(a, c, f.degree() + g.degree(), &(&g.action_matrix() * &f.action_matrix()))?;
                check.record(direct == oracle, || format!("f = {f:?}, g = {g:?}"));
            }
            checks.push(check);
        }
    }
    Ok(checks)
}

/// Associativity, unit, transpose and action compatibility of composition.
pub fn composition_laws(rings: &[Arc<ChowRing>], seed: u64, samples: usize) -> Result<Vec<IdentityCheck>> {
    let mut r = rng(seed);
    let mut checks = vec![
        IdentityCheck::new("associativity", "h ∘ (g ∘ f) = (h ∘ g) ∘ f"),
        IdentityCheck::new("diagonal unit", "Δ_B ∘ f = f = f ∘ Δ_A"),
        IdentityCheck::new("transpose of composite", "(g ∘ f)^t = f^t ∘ g^t"),
        IdentityCheck::new("action compatibility", "act(g ∘ f, a) = act(g, act(f, a))"),
        IdentityCheck::new("adjointness", "deg(act(f, a) · b) = deg(a · act(f^t, b))"),
    ];
    let pick = |r: &mut SeededRng| rings[r.gen_range(0..rings.len())].clone();
    for _ in 0..samples {
        let (a, b, c, d) = (pick(&mut r), pick(&mut r), pick(&mut r), pick(&mut r));
        let f = random_correspondence(&a, &b, random_degree(&a, &b, &mut r), COEFF_BOUND, &mut r);
        let g = random_correspondence(&b, &c, random_degree(&b, &c, &mut r), COEFF_BOUND, &mut r);
        let h = random_correspondence(&c, &d, random_degree(&c, &d, &mut r), COEFF_BOUND, &mut r);
        let gf = compose(&g, &f)?;
        checks[0].record(compose(&h, &gf)? == compose(&compose(&h, &g)?, &f)?, || format!("{f:?}"));
        let unit = compose(&diagonal(&b)?, &f)? == f && compose(&f, &diagonal(&a)?)? == f;
        checks[1].record(unit, || format!("{f:?}"));
        checks[2].record(transpose(&gf) == compose(&transpose(&f), &transpose(&g))?, || format!("{f:?}, {g:?}"));
        let x = random_cycle(&a, None, COEFF_BOUND, &mut r);
        checks[3].record(act(&gf, &x)? == act(&g, &act(&f, &x)?)?, || format!("{f:?}, {g:?}, {x}"));
        let y = random_cycle(&b, None, COEFF_BOUND, &mut r);
        let lhs = act(&f, &x)?.mul(&y)?.degree();
        let rhs = x.mul(&act(&transpose(&f), &y)?)?.degree();
        checks[4].record(lhs == rhs, || format!("{f:?}, {x}, {y}"));
    }
    Ok(checks)
}

/// All of the above with the default battery.
pub fn run_all(seed: u64, samples: usize) -> Result<Vec<IdentityCheck>> {
    let battery: Vec<Arc<ChowRing>> = (0..=2).map(projective_space).collect();
    let mut out = six_identities(seed, samples)?;
    out.extend(functoriality(seed.wrapping_add(1), samples)?);
    out.push(cancellation(seed.wrapping_add(2), samples, &battery)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::grassmannian;

    #[test]
    fn small_batteries_pass() {
        for c in run_all(5, 10).unwrap() {
            assert!(c.passed(), "{c:?}");
        }
        let rings = vec![projective_space(1), grassmannian(2, 4).unwrap()];
        for c in oracle_equivalence(&rings, 5, 5).unwrap() {
            assert!(c.passed(), "{c:?}");
        }
        for c in composition_laws(&rings, 5, 10).unwrap() {
            assert!(c.passed(), "{c:?}");
        }
    }
}
