//! Motives as (ring, projector) pairs and the cellular projector system.

use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::correspondence::{compose, diagonal, tensor, Correspondence};
use crate::error::{Error, Result};
use crate::fibration::{
    build_projector_family, sandwich, verify_operator_system, FamilyReport, FibrationModel, YOperator,
};
use crate::matrix::{q, Matrix};
use crate::ring::{kunneth_product, require_pairing, ChowRing};

/// `(X, p)` with `p` an idempotent correspondence of degree zero.
#[derive(Debug, Clone)]
pub struct Motive {
    ring: Arc<ChowRing>,
    projector: Correspondence,
}

impl Motive {
    pub fn new(projector: Correspondence) -> Result<Motive> {
        if !projector.source().same_as(projector.target()) {
            return Err(Error::RingMismatch("a motive projector must be an endomorphism".into()));
        }
        if projector.degree() != 0 && !projector.is_zero() {
            return Err(Error::NotHomogeneous(format!("projector has degree {}", projector.degree())));
        }
        if compose(&projector, &projector)? != projector {
            return Err(Error::SystemFailure("projector is not idempotent".into()));
        }
        Ok(Motive { ring: projector.source().clone(), projector })
    }

    /// `h(X) = (X, Δ_X)`.
    pub fn of(ring: &Arc<ChowRing>) -> Result<Motive> {
        Motive::new(diagonal(ring)?)
    }

    pub fn ring(&self) -> &Arc<ChowRing> {
        &self.ring
    }

    pub fn projector(&self) -> &Correspondence {
        &self.projector
    }

    /// Rank of the image of the projector on each `CH^p`.
    pub fn ranks(&self) -> Vec<usize> {
        (0..=self.ring.dimension()).map(|p| self.projector.action_block(p).rank()).collect()
    }
}

/// `p_{i,j,Z} = τ_{n−i,j} × τ_{i,j}`, one per cell, in cell order.
pub fn fiber_projectors(z: &Arc<ChowRing>) -> Result<Vec<Correspondence>> {
    require_pairing(z)?;
    (0..z.len())
        .map(|c| {
            let mut coeffs = Matrix::zeros(z.len(), z.len());
            coeffs.set(z.dual(c), c, q(1));
            Correspondence::new(z.clone(), z.clone(), 0, coeffs)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemReport {
    pub ring: String,
    pub projectors: usize,
    pub degree_zero: bool,
    pub idempotent: bool,
    pub orthogonal: bool,
    pub complete: bool,
    pub failures: Vec<String>,
}

impl SystemReport {
    pub fn passed(&self) -> bool {
        self.degree_zero && self.idempotent && self.orthogonal && self.complete
    }
}

/// Idempotence, orthogonality and `Σ p = Δ`, as exact identities of cycles.
pub fn verify_projector_system(ps: &[Correspondence]) -> Result<SystemReport> {
    let first = ps.first().ok_or_else(|| Error::SystemFailure("empty projector system".into()))?;
    let ring = first.source().clone();
    for p in ps {
        if !p.source().same_as(&ring) || !p.target().same_as(&ring) {
            return Err(Error::RingMismatch("projectors live on different rings".into()));
        }
    }
    let mut report = SystemReport {
        ring: ring.name().to_string(),
        projectors: ps.len(),
        degree_zero: true,
        idempotent: true,
        orthogonal: true,
        complete: true,
        failures: Vec::new(),
    };
    for (i, p) in ps.iter().enumerate() {
        if p.degree() != 0 && !p.is_zero() {
            report.degree_zero = false;
            report.failures.push(format!("projector {i} has degree {}", p.degree()));
        }
        for (j, other) in ps.iter().enumerate() {
            let c = compose(p, other)?;
            if i == j && c != *p {
                report.idempotent = false;
                report.failures.push(format!("projector {i} is not idempotent"));
            } else if i != j && !c.is_zero() {
                report.orthogonal = false;
                report.failures.push(format!("projectors {i} and {j} are not orthogonal"));
            }
        }
    }
    let mut sum = Correspondence::zero(&ring, &ring, 0);
    for p in ps {
        sum = sum.add(p)?;
    }
    if sum != diagonal(&ring)? {
        report.complete = false;
        report.failures.push("sum of projectors is not the diagonal".into());
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceSummary {
    pub label: String,
    pub codim: usize,
    pub ranks: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankRow {
    pub codim: usize,
    pub total: usize,
    pub pieces: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub space: String,
    pub pieces: Vec<PieceSummary>,
    pub ranks: Vec<RankRow>,
    /// Each piece's image is the span of its own basis element.
    pub images_match: bool,
    pub system: bool,
}

impl DecompositionReport {
    pub fn passed(&self) -> bool {
        self.system && self.images_match && self.ranks.iter().all(|r| r.total == r.pieces)
    }
}

fn rank_rows(totals: &[usize], pieces: &[PieceSummary]) -> Vec<RankRow> {
    totals
        .iter()
        .enumerate()
        .map(|(p, &total)| RankRow { codim: p, total, pieces: pieces.iter().map(|s| s.ranks[p]).sum() })
        .collect()
}

#[derive(Debug, Clone)]
pub struct MotiveDecomposition {
    pub parent: Motive,
    pub pieces: Vec<Motive>,
    pub report: DecompositionReport,
}

/// `h(Z) ≅ ⊕ (Z, p_{i,j,Z})`.
pub fn decompose_motive(z: &Arc<ChowRing>) -> Result<MotiveDecomposition> {
    let ps = fiber_projectors(z)?;
    let system = verify_projector_system(&ps)?;
    if !system.passed() {
        return Err(Error::SystemFailure(format!("{}: {}", z.name(), system.failures.join("; "))));
    }
    let mut pieces = Vec::new();
    let mut summaries = Vec::new();
    let mut images_match = true;
    for (c, p) in ps.into_iter().enumerate() {
        // the action must be the coordinate projection onto τ_c
        let action = p.action_matrix();
        let expected = Matrix::from_fn(z.len(), z.len(), |r, s| if r == c && s == c { q(1) } else { Zero::zero() });
        images_match &= action == expected;
        let m = Motive::new(p)?;
        summaries.push(PieceSummary { label: z.cell(c).label.clone(), codim: z.codim_of(c), ranks: m.ranks() });
        pieces.push(m);
    }
    let report = DecompositionReport {
        space: z.name().to_string(),
        ranks: rank_rows(&z.ranks(), &summaries),
        pieces: summaries,
        images_match,
        system: true,
    };
    Ok(MotiveDecomposition { parent: Motive::of(z)?, pieces, report })
}

/// Pieces of `h(Y)` for a fibration, indexed by (base cell, fiber cell):
/// `m_{T_g} ∘ π^∗ ∘ (p_{x,X})_∗ ∘ π_∗ ∘ m_{T_{n−g}} ∘ (id − Σ_W ρ)`.
pub fn decompose_model(model: &Arc<FibrationModel>) -> Result<(DecompositionReport, Vec<YOperator>)> {
    let family = build_projector_family(model)?;
    let base = model.base();
    let base_projectors = fiber_projectors(base)?;
    let mut ops = Vec::new();
    let mut named = Vec::new();
    let mut summaries = Vec::new();
    let mut images_match = true;
    for &idx in family.order() {
        let g = model.generator(idx)?;
        let correction = family.correction(idx);
        for (x, px) in base_projectors.iter().enumerate() {
            let op = &sandwich(model, g, Some(&px.action_matrix())) * &correction;
            let coord = model.coord(g, x);
            let expected =
                Matrix::from_fn(model.len(), model.len(), |r, s| if r == coord && s == coord { q(1) } else { Zero::zero() });
            images_match &= op == expected;
            let ranks = (0..=model.dimension())
                .map(|p| {
                    let cs = model.coords_in_codim(p);
                    Matrix::from_fn(cs.len(), cs.len(), |r, s| op.get(cs[r], cs[s]).clone()).rank()
                })
                .collect();
            let label = format!("{}·T[{}]", base.cell(x).label, model.fiber().cell(g).label);
            summaries.push(PieceSummary { label: label.clone(), codim: model.codim_of(coord), ranks });
            named.push((label, op.clone()));
            ops.push(op);
        }
    }
    let system: FamilyReport = verify_operator_system(model, &named);
    summaries.sort_by_key(|a| a.codim);
    let report = DecompositionReport {
        space: model.name().to_string(),
        ranks: rank_rows(&model.ranks(), &summaries),
        pieces: summaries,
        images_match,
        system: system.passed(),
    };
    Ok((report, ops))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorCheck {
    pub generator: (usize, usize),
    pub codims_checked: usize,
    pub agree: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorReport {
    pub base: String,
    pub fiber: String,
    pub checks: Vec<TensorCheck>,
}

impl TensorReport {
    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.agree)
    }
}

/// Operator projectors of `X × Z` against the cycles `Δ_X ⊗ p_{i,j,Z}`,
/// compared as action matrices on every graded piece of `CH^∗(X × Z)`.
pub fn tensor_identity_check(x: &Arc<ChowRing>, z: &Arc<ChowRing>) -> Result<TensorReport> {
    let model = crate::fibration::trivial_fibration(x, z)?;
    let family = build_projector_family(&model)?;
    let xz = kunneth_product(x, z);
    let factors = xz.factors().expect("product ring");
    let delta_x = diagonal(x)?;
    let ps = fiber_projectors(z)?;
    // Y coordinate (g, a) is the product cell (a, g)
    let to_cell: Vec<usize> = (0..model.len())
        .map(|c| {
            let (g, a) = model.split(c);
            factors.cell(a, g)
        })
        .collect();
    let mut checks = Vec::new();
    for &idx in family.order() {
        let g = model.generator(idx)?;
        let q_cycle = tensor(&delta_x, &ps[g], &xz, &xz)?;
        let action = q_cycle.action_matrix();
        let rho = family.operator(idx);
        let mut codims = 0;
        let mut agree = true;
        for p in 0..=xz.dimension() {
            let coords = model.coords_in_codim(p);
            for &r in &coords {
                for &c in &coords {
                    agree &= rho.get(r, c) == action.get(to_cell[r], to_cell[c]);
                }
            }
            // off-degree entries of the cycle action must vanish too
            for &c in &coords {
                for r in 0..model.len() {
                    if model.codim_of(r) != p {
                        agree &= action.get(to_cell[r], to_cell[c]).is_zero() && rho.get(r, c).is_zero();
                    }
                }
            }
            codims += 1;
        }
        checks.push(TensorCheck { generator: idx, codims_checked: codims, agree });
    }
    Ok(TensorReport { base: x.name().to_string(), fiber: z.name().to_string(), checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{grassmannian, hirzebruch, projective_space};
    use crate::correspondence::act;
    use crate::ring::Cycle;

    #[test]
    fn p1_fiber_projectors() {
        let p1 = projective_space(1);
        let ps = fiber_projectors(&p1).unwrap();
        let prod = kunneth_product(&p1, &p1);
        assert_eq!(ps[0].to_cycle(&prod).unwrap(), Cycle::from_labels(&prod, &[("h⊗1", 1)]).unwrap());
        assert_eq!(ps[1].to_cycle(&prod).unwrap(), Cycle::from_labels(&prod, &[("1⊗h", 1)]).unwrap());
    }

    #[test]
    fn p2_projector_contracts() {
        let p2 = projective_space(2);
        let ps = fiber_projectors(&p2).unwrap();
        let a = Cycle::from_labels(&p2, &[("h", 3), ("h^2", 5)]).unwrap();
        assert_eq!(act(&ps[1], &a).unwrap(), Cycle::from_labels(&p2, &[("h", 3)]).unwrap());
    }

    #[test]
    fn systems() {
        let p2 = projective_space(2);
        assert!(verify_projector_system(&fiber_projectors(&p2).unwrap()).unwrap().passed());
        assert!(verify_projector_system(&[diagonal(&p2).unwrap()]).unwrap().passed());
        let p = fiber_projectors(&p2).unwrap()[1].clone();
        let r = verify_projector_system(&[p.clone(), p]).unwrap();
        assert!(!r.orthogonal && r.idempotent);
    }

    #[test]
    fn decompositions() {
        assert_eq!(decompose_motive(&projective_space(2)).unwrap().pieces.len(), 3);
        assert_eq!(decompose_motive(&projective_space(0)).unwrap().pieces.len(), 1);
        let g = decompose_motive(&grassmannian(2, 4).unwrap()).unwrap();
        let codims: Vec<usize> = g.report.pieces.iter().map(|p| p.codim).collect();
        assert_eq!(codims, [0, 1, 2, 2, 3, 4]);
        assert!(g.report.passed());
    }

    #[test]
    fn hirzebruch_model_pieces() {
        let (report, ops) = decompose_model(&hirzebruch(2).unwrap()).unwrap();
        assert_eq!(ops.len(), 4);
        assert!(report.passed());
        let totals: Vec<usize> = report.ranks.iter().map(|r| r.pieces).collect();
        assert_eq!(totals, [1, 2, 1]);
    }

    #[test]
    fn tensor_identity_small() {
        let pt = projective_space(0);
        let p1 = projective_space(1);
        assert!(tensor_identity_check(&pt, &p1).unwrap().passed());
        let r = tensor_identity_check(&p1, &p1).unwrap();
        assert_eq!(r.checks.len(), 2);
        assert!(r.passed());
    }
}
