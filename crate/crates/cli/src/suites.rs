//! The verification suites, each producing one report section per subject.

use std::sync::Arc;

use chowmot::catalog::{grassmannian, projective_space, CatalogItem};
use chowmot::fibration::{
    build_projector_family, duality_triple, manin_battery, validate_fibration, verify_family, FibrationModel, YCycle,
};
use chowmot::identities::{cancellation, oracle_equivalence, run_all, IdentityCheck};
use chowmot::motives::{decompose_model, fiber_projectors, verify_projector_system};
use chowmot::murre::{cellular_ck, lift_and_verify, verify_action_window, verify_ck, LiftReport};
use chowmot::random::{random_cycle, random_ycycle, rng};
use chowmot::ring::{verify_pairing, ChowRing, Cycle};
use chowmot::Result;
use clap::ValueEnum;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::report::{CheckLine, Section, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Pairing,
    Duality,
    Projectors,
    Manin,
    Motives,
    Ck,
    Murre,
    Identities,
    All,
}

impl Suite {
    pub const CONCRETE: [Suite; 8] = [
        Suite::Pairing,
        Suite::Duality,
        Suite::Projectors,
        Suite::Manin,
        Suite::Motives,
        Suite::Ck,
        Suite::Murre,
        Suite::Identities,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Pairing => "pairing",
            Suite::Duality => "duality",
            Suite::Projectors => "projectors",
            Suite::Manin => "manin",
            Suite::Motives => "motives",
            Suite::Ck => "ck",
            Suite::Murre => "murre",
            Suite::Identities => "identities",
            Suite::All => "all",
        }
    }

    /// Suites that do not depend on the input spaces run once.
    pub fn is_global(self) -> bool {
        matches!(self, Suite::Manin | Suite::Identities)
    }
}

/// A loaded input: a ring or a fibration model.
#[derive(Debug, Clone)]
pub struct Subject {
    pub label: String,
    pub item: CatalogItem,
}

impl Subject {
    fn rings(&self) -> Vec<Arc<ChowRing>> {
        match &self.item {
            CatalogItem::Ring(r) => vec![r.clone()],
            CatalogItem::Model(m) => vec![m.base().clone(), m.fiber().clone()],
        }
    }

    fn model(&self) -> Result<Arc<FibrationModel>> {
        self.item.as_model()
    }
}

pub struct Context {
    pub battery: Vec<Arc<ChowRing>>,
    pub seed: u64,
    pub samples: usize,
}

pub fn run_suite(suite: Suite, subject: Option<&Subject>, ctx: &Context) -> Result<Section> {
    let label = subject.map_or("-", |s| s.label.as_str());
    let mut section = Section::new(suite.name(), label);
    match (suite, subject) {
        (Suite::Pairing, Some(s)) => pairing(s, &mut section),
        (Suite::Duality, Some(s)) => duality(s, ctx, &mut section)?,
        (Suite::Projectors, Some(s)) => projectors(s, ctx, &mut section)?,
        (Suite::Motives, Some(s)) => motives(s, &mut section)?,
        (Suite::Murre, Some(s)) => murre(s, &mut section)?,
        (Suite::Ck, Some(s)) => ck(s, ctx, &mut section)?,
        (Suite::Manin, _) => manin(ctx, &mut section)?,
        (Suite::Identities, _) => identities(ctx, &mut section)?,
        (Suite::All, _) | (_, None) => unreachable!("resolved by the runner"),
    }
    Ok(section)
}

fn from_identity(c: &IdentityCheck) -> CheckLine {
    let line = CheckLine::new(&c.name, &c.anchor, c.samples, c.failures);
    match &c.first_failure {
        Some(f) => line.with_detail(f),
        None => line,
    }
}

fn pairing(s: &Subject, out: &mut Section) {
    for ring in s.rings() {
        let report = verify_pairing(&ring);
        let literal = if report.literal_identity() { "literal identity" } else { "matches the dual involution" };
        let mut line = CheckLine::new(
            format!("pairing on {}", ring.name()),
            "deg(τ_{p,i} · τ_{n−p,j}) = δ(dual(p,i), (n−p,j))",
            report.blocks.len(),
            report.violations.len(),
        )
        .with_detail(literal);
        if let Some(v) = report.violations.first() {
            line = line.with_detail(format!("codim {} entry ({},{}) = {}, expected {}", v.codim, v.row, v.col, v.value, v.expected));
        }
        out.checks.push(line);
    }
}

fn validation_line(model: &Arc<FibrationModel>) -> CheckLine {
    let v = validate_fibration(model);
    let line = CheckLine::new(
        "model validation",
        "grading, unit, restriction, commutativity, associativity, duality",
        1,
        v.violations.len(),
    );
    match v.violations.first() {
        Some(first) => line.with_detail(format!("{} at {}: {}", first.check, first.location, first.detail)),
        None => line,
    }
}

fn duality(s: &Subject, ctx: &Context, out: &mut Section) -> Result<()> {
    let model = s.model()?;
    out.checks.push(validation_line(&model));
    let fiber = model.fiber().clone();
    let n = fiber.dimension();
    let mut r = rng(ctx.seed);
    let (mut count, mut failures) = (0, 0);
    let mut detail = None;
    for _ in 0..ctx.samples {
        let alpha = random_cycle(model.base(), None, 10, &mut r);
        for a in 0..fiber.len() {
            for b in 0..fiber.len() {
                let (left, right) = (model.generator_index(a), model.generator_index(b));
                if left.0 + right.0 > n {
                    continue;
                }
                let (got, _) = duality_triple(&model, &alpha, left, right)?;
                let expected = if fiber.dual(a) == b { alpha.clone() } else { Cycle::zero(model.base(), alpha.mode()) };
                count += 1;
                if got != expected {
                    failures += 1;
                    detail.get_or_insert_with(|| format!("{left:?},{right:?} on {alpha}: got {got}"));
                }
            }
        }
    }
    let mut line = CheckLine::new("duality", "π_∗(π^∗α · T_{p,i} · T_{q,j}) = δ α", count, failures);
    line.detail = detail;
    out.checks.push(line);
    Ok(())
}

fn projectors(s: &Subject, ctx: &Context, out: &mut Section) -> Result<()> {
    let model = s.model()?;
    let family = build_projector_family(&model)?;
    let family_anchor = "ρ degree-preserving, ρ∘ρ = ρ, ρ∘ρ' = 0, Σ ρ = id";
    let report = verify_family(&family);
    let mut line = CheckLine::new(format!("family on {}", model.name()), family_anchor, report.projectors, report.failures.len());
    line.detail = report.failures.first().cloned();
    out.checks.push(line);

    let mut r = rng(ctx.seed);
    let (mut count, mut failures) = (0, 0);
    for _ in 0..ctx.samples {
        let p = r.gen_range(0..=model.dimension());
        let y = random_ycycle(&model, Some(p), 10, &mut r);
        for &(i, j) in family.order() {
            let g = model.generator((i, j))?;
            let expected =
                if i <= p { YCycle::from_components(&model, &[(g, y.component(g))])? } else { YCycle::zero(&model) };
            count += 1;
            failures += usize::from(y.apply(family.operator((i, j))) != expected);
        }
    }
    out.checks.push(CheckLine::new(
        "action formula",
        "ρ_{i,j}(Σ π^∗α_{k,l} T_{k,l}) = π^∗α_{i,j} T_{i,j} when i ≤ p, else 0",
        count,
        failures,
    ));

    let battery = manin_battery(&model, &ctx.battery)?;
    for e in &battery.entries {
        let mut line = CheckLine::new(
            format!("family on {}×{}", e.test_ring, model.name()),
            family_anchor,
            e.report.projectors,
            e.report.failures.len(),
        );
        line.detail = e.report.failures.first().cloned();
        out.checks.push(line);
    }
    Ok(())
}

fn manin(ctx: &Context, out: &mut Section) -> Result<()> {
    out.checks.push(from_identity(&cancellation(ctx.seed, ctx.samples, &ctx.battery)?));
    Ok(())
}

fn motives(s: &Subject, out: &mut Section) -> Result<()> {
    let model = s.model()?;
    let (report, _) = decompose_model(&model)?;
    out.checks.push(CheckLine::flag("projector system on Y", "ρ idempotent, orthogonal, Σ ρ = id", report.system));
    out.checks.push(CheckLine::flag("piece images", "im ρ_k = span of its basis element", report.images_match));
    let mismatched = report.ranks.iter().filter(|r| r.total != r.pieces).count();
    out.checks.push(CheckLine::new(
        "rank reconciliation",
        "rank CH^p(Y) = Σ_k rank CH^p(piece k)",
        report.ranks.len(),
        mismatched,
    ));
    let fiber = model.fiber();
    let system = verify_projector_system(&fiber_projectors(fiber)?)?;
    let mut line = CheckLine::new(
        format!("fiber projectors on {}", fiber.name()),
        "p∘p = p, p∘p' = 0, Σ p = Δ",
        system.projectors,
        system.failures.len(),
    );
    line.detail = system.failures.first().cloned();
    out.checks.push(line);

    out.tables.push(Table {
        title: format!("{} pieces", report.pieces.len()),
        header: vec!["piece".into(), "codim".into(), "ranks".into()],
        rows: report
            .pieces
            .iter()
            .map(|p| vec![p.label.clone(), p.codim.to_string(), format!("{:?}", p.ranks)])
            .collect(),
    });
    out.tables.push(Table {
        title: "ranks per codim".into(),
        header: vec!["p".into(), "CH^p".into(), "pieces".into()],
        rows: report.ranks.iter().map(|r| vec![r.codim.to_string(), r.total.to_string(), r.pieces.to_string()]).collect(),
    });
    Ok(())
}

fn murre(s: &Subject, out: &mut Section) -> Result<()> {
    for ring in s.rings() {
        let ck = cellular_ck(&ring)?;
        let report = verify_ck(&ck)?;
        out.checks.push(CheckLine::flag(format!("(a) on {}", ring.name()), "π_i ∘ π_j = δ_ij π_i", report.condition_a));
        out.checks.push(
            CheckLine::flag(format!("(b) on {}", ring.name()), "Σ π_i = Δ", report.condition_b)
                .with_detail(report.condition_c.clone()),
        );
        let window = verify_action_window(&ck);
        out.checks.push(CheckLine::new(
            format!("action window on {}", ring.name()),
            "π_k acts as 0 on CH^p for k < p or k > 2p",
            window.support.iter().map(Vec::len).sum(),
            window.violations.len(),
        ));
    }
    Ok(())
}

fn ck(s: &Subject, ctx: &Context, out: &mut Section) -> Result<()> {
    let model = s.model()?;
    let base = cellular_ck(model.base())?;
    let report = lift_and_verify(&model, &base, &ctx.battery)?;
    push_lift(&report, out);
    Ok(())
}

fn push_lift(report: &LiftReport, out: &mut Section) {
    out.checks.push(CheckLine::flag("index sets", "I_k partition {0..2d} × {0..2n}", report.plan.is_partition()));
    let ck = &report.ck;
    let mut a = CheckLine::flag("(a)", "π_i ∘ π_j = δ_ij π_i", ck.condition_a);
    a.count = ck.projectors * ck.projectors;
    out.checks.push(a);
    out.checks.push(CheckLine::flag("(b)", "Σ π_k = id", ck.condition_b).with_detail(ck.condition_c.clone()));
    out.checks.push(CheckLine::new(
        "action window",
        "π_k acts as 0 on CH^p for k < p or k > 2p",
        report.window.support.iter().map(Vec::len).sum(),
        report.window.violations.len(),
    ));
    out.checks.push(CheckLine::flag("block diagonality", "𝔭_j'(π_i') ∘ 𝔭_j(π_i) = δ 𝔭_j(π_i)", report.block_diagonal));
    out.checks.push(CheckLine::new(
        "block windows",
        "𝔭_j(π_i) acts as 0 on CH^p unless p ≤ i + j ≤ 2p",
        1,
        report.block_window_violations.len(),
    ));
    for (t, ok) in &report.battery {
        out.checks.push(CheckLine::flag(format!("(a), (b) on {t}×Y"), "lifted projectors on T × Y", *ok));
    }
    let dim = report.window.support.first().map_or(0, Vec::len);
    let mut header = vec!["π_k".to_string()];
    header.extend((0..dim).map(|p| format!("CH^{p}")));
    out.tables.push(Table {
        title: format!("support of π_0..π_{} (rank on each CH^p)", report.window.support.len().saturating_sub(1)),
        header,
        rows: report
            .window
            .support
            .iter()
            .enumerate()
            .map(|(k, row)| std::iter::once(format!("π_{k}")).chain(row.iter().map(|r| r.to_string())).collect())
            .collect(),
    });
}

fn identities(ctx: &Context, out: &mut Section) -> Result<()> {
    for c in run_all(ctx.seed, ctx.samples)? {
        out.checks.push(from_identity(&c));
    }
    let rings = vec![projective_space(1), projective_space(2), grassmannian(2, 4)?];
    for c in oracle_equivalence(&rings, ctx.seed.wrapping_add(3), ctx.samples)? {
        out.checks.push(from_identity(&c));
    }
    Ok(())
}
