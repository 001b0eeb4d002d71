//! Chow–Künneth decompositions over `Q`.
//!
//! For a cellular ring the projectors are cycles, `π_{2i} = Σ_j τ_{d−i,j} × τ_{i,j}`.
//! For a fibration they are operators on `CH^∗(Y)` obtained by lifting a CK
//! decomposition of the base through the blocks `𝔭_j(π_i)`.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::correspondence::{ambient_action_matrix, compose, diagonal, Correspondence};
use crate::error::{Error, Result};
use crate::fibration::{ambient_extend, build_projector_family, sandwich, FibrationModel, ProjectorFamily, YOperator};
use crate::matrix::{q, Matrix};
use crate::ring::{require_pairing, ChowRing};

/// Where the projectors act.
#[derive(Debug, Clone)]
pub enum CkSpace {
    Ring(Arc<ChowRing>),
    Model(Arc<FibrationModel>),
}

impl CkSpace {
    pub fn name(&self) -> String {
        match self {
            CkSpace::Ring(r) => r.name().to_string(),
            CkSpace::Model(m) => m.name().to_string(),
        }
    }

    pub fn dimension(&self) -> usize {
        match self {
            CkSpace::Ring(r) => r.dimension(),
            CkSpace::Model(m) => m.dimension(),
        }
    }

    fn len(&self) -> usize {
        match self {
            CkSpace::Ring(r) => r.len(),
            CkSpace::Model(m) => m.len(),
        }
    }

    fn codim_of(&self, c: usize) -> usize {
        match self {
            CkSpace::Ring(r) => r.codim_of(c),
            CkSpace::Model(m) => m.codim_of(c),
        }
    }

    fn coords_in_codim(&self, p: usize) -> Vec<usize> {
        (0..self.len()).filter(|&c| self.codim_of(c) == p).collect()
    }
}

/// Projectors `π_0 .. π_{2d}`, always with their action matrices and, for
/// cellular rings, also as cycles.
#[derive(Debug, Clone)]
pub struct CKDecomposition {
    space: CkSpace,
    operators: Vec<Matrix>,
    cycles: Option<Vec<Correspondence>>,
}

impl CKDecomposition {
    /// A family of cycle projectors on a ring.
    pub fn from_cycles(ring: &Arc<ChowRing>, cycles: Vec<Correspondence>) -> Result<CKDecomposition> {
        for c in &cycles {
            if !c.source().same_as(ring) || !c.target().same_as(ring) {
                return Err(Error::RingMismatch("CK projector on a different ring".into()));
            }
        }
        let operators = cycles.iter().map(Correspondence::action_matrix).collect();
        Ok(CKDecomposition { space: CkSpace::Ring(ring.clone()), operators, cycles: Some(cycles) })
    }

    /// A family of operators on `CH^∗(Y)`.
    pub fn from_operators(model: &Arc<FibrationModel>, operators: Vec<YOperator>) -> Result<CKDecomposition> {
        if operators.iter().any(|o| o.rows() != model.len() || o.cols() != model.len()) {
            return Err(Error::RingMismatch("operator size does not match the model".into()));
        }
        Ok(CKDecomposition { space: CkSpace::Model(model.clone()), operators, cycles: None })
    }

    pub fn space(&self) -> &CkSpace {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn operator(&self, k: usize) -> &Matrix {
        &self.operators[k]
    }

    pub fn operators(&self) -> &[Matrix] {
        &self.operators
    }

    pub fn cycles(&self) -> Option<&[Correspondence]> {
        self.cycles.as_deref()
    }

    /// Rank of each projector as an operator.
    pub fn ranks(&self) -> Vec<usize> {
        self.operators.iter().map(Matrix::rank).collect()
    }
}

/// `π_{2i} = Σ_j τ_{d−i,j} × τ_{i,j}` and `π_{2i+1} = 0`.
pub fn cellular_ck(x: &Arc<ChowRing>) -> Result<CKDecomposition> {
    require_pairing(x)?;
    let d = x.dimension();
    let mut cycles = Vec::with_capacity(2 * d + 1);
    for k in 0..=2 * d {
        let mut coeffs = Matrix::zeros(x.len(), x.len());
        if k % 2 == 0 {
            for c in x.codim_range(k / 2) {
                coeffs.set(x.dual(c), c, q(1));
            }
        }
        cycles.push(Correspondence::new(x.clone(), x.clone(), 0, coeffs)?);
    }
    CKDecomposition::from_cycles(x, cycles)
}

pub const CONDITION_C: &str = "condition (c): not checked (out of scope, no cohomology realization)";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CkReport {
    pub space: String,
    pub projectors: usize,
    /// `π_i ∘ π_j = δ_{ij} π_i`.
    pub condition_a: bool,
    /// `Σ π_i = Δ`.
    pub condition_b: bool,
    pub condition_c: String,
    pub ranks: Vec<usize>,
    pub failures: Vec<String>,
}

impl CkReport {
    pub fn passed(&self) -> bool {
        self.condition_a && self.condition_b
    }
}

pub fn verify_ck(ck: &CKDecomposition) -> Result<CkReport> {
    let mut failures = Vec::new();
    let (mut a, mut b) = (true, true);
    let ops = &ck.operators;
    for (i, p) in ops.iter().enumerate() {
        for (j, r) in ops.iter().enumerate() {
            let c = p * r;
            let ok = if i == j { c == *p } else { c.is_zero() };
            if !ok {
                a = false;
                failures.push(format!("(a) fails for π_{i} ∘ π_{j}"));
            }
        }
    }
    let mut sum = Matrix::zeros(ck.space.len(), ck.space.len());
    for p in ops {
        sum = &sum + p;
    }
    if !sum.is_identity() {
        b = false;
        failures.push("(b) fails: Σ π_i ≠ id".into());
    }
    // for cycles, the same again at the level of correspondences
    if let (Some(cycles), CkSpace::Ring(ring)) = (&ck.cycles, &ck.space) {
        for (i, p) in cycles.iter().enumerate() {
            for (j, r) in cycles.iter().enumerate() {
                let c = compose(p, r)?;
                let ok = if i == j { c == *p } else { c.is_zero() };
                if !ok {
                    a = false;
                    failures.push(format!("(a) fails for cycles π_{i} ∘ π_{j}"));
                }
            }
        }
        let mut total = Correspondence::zero(ring, ring, 0);
        for p in cycles {
            total = total.add(p)?;
        }
        if total != diagonal(ring)? {
            b = false;
            failures.push("(b) fails: Σ π_i ≠ Δ as cycles".into());
        }
    }
    Ok(CkReport {
        space: ck.space.name(),
        projectors: ops.len(),
        condition_a: a,
        condition_b: b,
        condition_c: CONDITION_C.into(),
        ranks: ck.ranks(),
        failures,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionReport {
    pub space: String,
    /// `support[k][j]` is the rank of `π_k` on `CH^j`.
    pub support: Vec<Vec<usize>>,
    /// `(k, j)` with `k < j` or `k > 2j` and nonzero action.
    pub violations: Vec<(usize, usize)>,
}

impl ActionReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// Total rank of each `π_k` summed over codims.
    pub fn ranks(&self) -> Vec<usize> {
        self.support.iter().map(|row| row.iter().sum()).collect()
    }
}

fn restrict(space: &CkSpace, op: &Matrix, p: usize) -> Matrix {
    let cols = space.coords_in_codim(p);
    let rows: Vec<usize> = (0..space.len()).collect();
    Matrix::from_fn(rows.len(), cols.len(), |r, c| op.get(rows[r], cols[c]).clone())
}

/// `π_k` must act as zero on `CH^j` for `k < j` and `k > 2j`.
pub fn verify_action_window(ck: &CKDecomposition) -> ActionReport {
    let dim = ck.space.dimension();
    let mut support = Vec::new();
    let mut violations = Vec::new();
    for (k, op) in ck.operators.iter().enumerate() {
        let mut row = Vec::new();
        for j in 0..=dim {
            let r = restrict(&ck.space, op, j).rank();
            if r > 0 && (k < j || k > 2 * j) {
                violations.push((k, j));
            }
            row.push(r);
        }
        support.push(row);
    }
    ActionReport { space: ck.space.name(), support, violations }
}

/// `𝔭_j(φ)` for a base correspondence `φ: X → X`.
pub fn frak_p(model: &Arc<FibrationModel>, phi: &Correspondence, j: usize) -> Result<YOperator> {
    if !phi.source().same_as(model.base()) || !phi.target().same_as(model.base()) {
        return Err(Error::RingMismatch("𝔭_j needs a correspondence on the base".into()));
    }
    let family = build_projector_family(model)?;
    frak_p_action(&family, &phi.action_matrix(), j)
}

/// `𝔭_j` with the base correspondence given by its action on `CH^∗(X)`.
pub fn frak_p_action(family: &ProjectorFamily, base_action: &Matrix, j: usize) -> Result<YOperator> {
    let model = family.model();
    let n = model.fiber_dim();
    if j > 2 * n {
        return Err(Error::OutOfRange(format!("𝔭_{j} needs 0 ≤ j ≤ {}", 2 * n)));
    }
    let mut out = Matrix::zeros(model.len(), model.len());
    if j % 2 == 1 {
        return Ok(out);
    }
    let i = j / 2;
    for lambda in 1..=model.fiber().rank(i) {
        let g = model.generator((i, lambda))?;
        let block = &sandwich(model, g, Some(base_action)) * &family.correction((i, lambda));
        out = &out + &block;
    }
    Ok(out)
}

/// `I_k = {(i, j) : i + j = k, 0 ≤ i ≤ 2d, 0 ≤ j ≤ 2n}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftPlan {
    pub base_dim: usize,
    pub fiber_dim: usize,
    pub index_sets: Vec<Vec<(usize, usize)>>,
}

impl LiftPlan {
    pub fn new(d: usize, n: usize) -> LiftPlan {
        let index_sets = (0..=2 * (d + n))
            .map(|k| (0..=2 * d).filter(|&i| k >= i && k - i <= 2 * n).map(|i| (i, k - i)).collect())
            .collect();
        LiftPlan { base_dim: d, fiber_dim: n, index_sets }
    }

    /// Pairwise disjoint and covering `{0..2d} × {0..2n}`.
    pub fn is_partition(&self) -> bool {
        let mut seen = std::collections::BTreeSet::new();
        for set in &self.index_sets {
            for &p in set {
                if !seen.insert(p) {
                    return false;
                }
            }
        }
        let (d, n) = (self.base_dim, self.fiber_dim);
        seen.len() == (2 * d + 1) * (2 * n + 1) && seen.iter().all(|&(i, j)| i <= 2 * d && j <= 2 * n)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftReport {
    pub model: String,
    pub plan: LiftPlan,
    pub ck: CkReport,
    pub window: ActionReport,
    /// `𝔭_{j'}(π_{i'}) ∘ 𝔭_j(π_i) = δ 𝔭_j(π_i)` for all block pairs.
    pub block_diagonal: bool,
    /// Blocks `𝔭_j(π_i)` that act nonzero on `CH^p` with `i + j` outside `[p, 2p]`.
    pub block_window_violations: Vec<(usize, usize, usize)>,
    pub battery: Vec<(String, bool)>,
}

impl LiftReport {
    pub fn passed(&self) -> bool {
        self.ck.passed()
            && self.window.passed()
            && self.block_diagonal
            && self.block_window_violations.is_empty()
            && self.plan.is_partition()
            && self.battery.iter().all(|(_, ok)| *ok)
    }
}

#[derive(Debug, Clone)]
pub struct LiftedCk {
    pub plan: LiftPlan,
    pub ck: CKDecomposition,
    /// `blocks[(i, j)] = 𝔭_j(π_i(X))`.
    pub blocks: std::collections::BTreeMap<(usize, usize), YOperator>,
}

type Blocks = std::collections::BTreeMap<(usize, usize), YOperator>;

fn lift_operators(
    family: &ProjectorFamily,
    base_actions: &[Matrix],
    plan: &LiftPlan,
) -> Result<(Vec<YOperator>, Blocks)> {
    let model = family.model();
    let mut blocks = std::collections::BTreeMap::new();
    for (i, a) in base_actions.iter().enumerate() {
        for j in 0..=2 * plan.fiber_dim {
            blocks.insert((i, j), frak_p_action(family, a, j)?);
        }
    }
    let ops = plan
        .index_sets
        .iter()
        .map(|set| {
            set.iter().fold(Matrix::zeros(model.len(), model.len()), |acc, idx| &acc + &blocks[idx])
        })
        .collect();
    Ok((ops, blocks))
}

fn require_hypothesis(base_ck: &CKDecomposition) -> Result<()> {
    let report = verify_ck(base_ck)?;
    if !report.passed() {
        return Err(Error::Hypothesis(format!("base CK fails: {}", report.failures.join("; "))));
    }
    let window = verify_action_window(base_ck);
    if !window.passed() {
        return Err(Error::Hypothesis(format!("base CK acts outside the window at {:?}", window.violations)));
    }
    Ok(())
}

/// `π_k(Y) = Σ_{(i,j) ∈ I_k} 𝔭_j(π_i(X))`.
pub fn lift_ck(model: &Arc<FibrationModel>, base_ck: &CKDecomposition) -> Result<LiftedCk> {
    match base_ck.space() {
        CkSpace::Ring(r) if r.same_as(model.base()) => {}
        _ => return Err(Error::RingMismatch("base CK must live on the model's base ring".into())),
    }
    require_hypothesis(base_ck)?;
    let family = build_projector_family(model)?;
    let plan = LiftPlan::new(model.base().dimension(), model.fiber_dim());
    let (ops, blocks) = lift_operators(&family, base_ck.operators(), &plan)?;
    Ok(LiftedCk { plan, ck: CKDecomposition::from_operators(model, ops)?, blocks })
}

/// Lifts, then checks (a), (b), the action window on `Y`, block
/// diagonality, and (a), (b) again on `T × Y` for each battery ring `T`.
pub fn lift_and_verify(
    model: &Arc<FibrationModel>,
    base_ck: &CKDecomposition,
    battery: &[Arc<ChowRing>],
) -> Result<LiftReport> {
    let lifted = lift_ck(model, base_ck)?;
    let ck = verify_ck(&lifted.ck)?;
    let window = verify_action_window(&lifted.ck);

    let blocks: Vec<(&(usize, usize), &YOperator)> = lifted.blocks.iter().collect();
    let block_diagonal = blocks.par_iter().all(|(ka, a)| {
        blocks.iter().all(|(kb, b)| {
            let c = *b * *a;
            if ka == kb { c == **a } else { c.is_zero() }
        })
    });

    let space = lifted.ck.space().clone();
    let mut block_window_violations = Vec::new();
    for (&(i, j), op) in &lifted.blocks {
        let k = i + j;
        for p in 0..=model.dimension() {
            if (k < p || k > 2 * p) && !restrict(&space, op, p).is_zero() {
                block_window_violations.push((i, j, p));
            }
        }
    }

    let cycles = match base_ck.cycles() {
        Some(c) => c,
        None if battery.is_empty() => &[],
        None => return Err(Error::Hypothesis("battery needs a cycle-level base CK".into())),
    };
    let battery_results: Result<Vec<(String, bool)>> = battery
        .par_iter()
        .map(|t| {
            let extended = ambient_extend(model, t)?;
            let family = build_projector_family(&extended)?;
            let base_t = extended.base();
            let actions = cycles
                .iter()
                .map(|c| ambient_action_matrix(c, base_t, base_t))
                .collect::<Result<Vec<_>>>()?;
            let (ops, _) = lift_operators(&family, &actions, &lifted.plan)?;
            let report = verify_ck(&CKDecomposition::from_operators(&extended, ops)?)?;
            Ok((t.name().to_string(), report.passed()))
        })
        .collect();

    Ok(LiftReport {
        model: model.name().to_string(),
        plan: lifted.plan,
        ck,
        window,
        block_diagonal,
        block_window_violations,
        battery: battery_results?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{grassmannian, hirzebruch, projective_space};
    use crate::fibration::trivial_fibration;

    #[test]
    fn cellular_p2_and_gr24() {
        let ck = cellular_ck(&projective_space(2)).unwrap();
        assert_eq!(ck.ranks(), [1, 0, 1, 0, 1]);
        assert!(verify_ck(&ck).unwrap().passed());
        let g = cellular_ck(&grassmannian(2, 4).unwrap()).unwrap();
        assert_eq!(g.ranks()[4], 2);
        let w = verify_action_window(&g);
        assert!(w.passed());
        for (k, row) in w.support.iter().enumerate() {
            for (j, &r) in row.iter().enumerate() {
                assert_eq!(r > 0, k == 2 * j);
            }
        }
    }

    #[test]
    fn broken_families_fail() {
        let p2 = projective_space(2);
        let ck = cellular_ck(&p2).unwrap();
        let mut cycles = ck.cycles().unwrap().to_vec();
        cycles[1] = cycles[0].clone();
        let dup = CKDecomposition::from_cycles(&p2, cycles).unwrap();
        assert!(!verify_ck(&dup).unwrap().condition_a);

        let mut cycles = ck.cycles().unwrap().to_vec();
        cycles.pop();
        let short = CKDecomposition::from_cycles(&p2, cycles).unwrap();
        let r = verify_ck(&short).unwrap();
        assert!(r.condition_a && !r.condition_b);

        // π_{2i} moved to slot 2i + 1
        let mut cycles = ck.cycles().unwrap().to_vec();
        cycles.swap(2, 3);
        let shifted = CKDecomposition::from_cycles(&p2, cycles).unwrap();
        let w = verify_action_window(&shifted);
        assert_eq!(w.violations, vec![(3, 1)]);
    }

    #[test]
    fn frak_p_sums_to_identity() {
        let m = hirzebruch(1).unwrap();
        let delta = diagonal(m.base()).unwrap();
        let mut total = Matrix::zeros(m.len(), m.len());
        for j in 0..=2 {
            total = &total + &frak_p(&m, &delta, j).unwrap();
        }
        assert!(total.is_identity());
        assert!(frak_p(&m, &delta, 1).unwrap().is_zero());
        assert!(frak_p(&m, &delta, 3).is_err());
    }

    #[test]
    fn lift_over_point_is_cellular() {
        let pt = projective_space(0);
        let p2 = projective_space(2);
        let m = trivial_fibration(&pt, &p2).unwrap();
        let lifted = lift_ck(&m, &cellular_ck(&pt).unwrap()).unwrap();
        let direct = cellular_ck(&p2).unwrap();
        assert_eq!(lifted.ck.operators(), direct.operators());
    }

    #[test]
    fn plan_partitions() {
        for d in 0..=3 {
            for n in 0..=3 {
                assert!(LiftPlan::new(d, n).is_partition());
            }
        }
    }

    #[test]
    fn hirzebruch_lift() {
        let m = hirzebruch(1).unwrap();
        let base = cellular_ck(m.base()).unwrap();
        let report = lift_and_verify(&m, &base, &[projective_space(0)]).unwrap();
        assert!(report.passed(), "{report:?}");
        assert_eq!(report.window.ranks(), [1, 0, 2, 0, 1]);
    }

    #[test]
    fn hypothesis_failure_reported() {
        let p1 = projective_space(1);
        let m = trivial_fibration(&p1, &p1).unwrap();
        let ck = cellular_ck(&p1).unwrap();
        let mut cycles = ck.cycles().unwrap().to_vec();
        cycles.swap(0, 1);
        let bad = CKDecomposition::from_cycles(&p1, cycles).unwrap();
        assert!(matches!(lift_ck(&m, &bad), Err(Error::Hypothesis(_))));
    }
}
