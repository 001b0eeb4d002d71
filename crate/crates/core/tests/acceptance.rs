//! Acceptance suite. Run with `cargo test -p chowmot --test acceptance`.
//!
//! Prints one line per criterion and exits nonzero if any fails.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use chowmot::catalog::{grassmannian, hirzebruch, pieri, projective_bundle_model, projective_space, schubert};
use chowmot::fibration::{
    build_projector_family, duality_triple, manin_battery, motive_iso_pair, pairing_rank, trivial_fibration,
    validate_fibration, verify_family, FibrationModel, YCycle,
};
use chowmot::identities::{functoriality, oracle_equivalence, six_identities};
use chowmot::motives::{fiber_projectors, tensor_identity_check, verify_projector_system, Motive};
use chowmot::murre::{cellular_ck, lift_and_verify};
use chowmot::random::{random_cycle, random_ycycle, rng};
use chowmot::ring::{kunneth_product, verify_pairing, ChowRing, Cycle};

const SEED: u64 = 20240917;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: chowmot::Error) -> String {
    e.to_string()
}

fn models() -> Vec<Arc<FibrationModel>> {
    let fibers = [projective_space(1), projective_space(2), grassmannian(2, 4).unwrap()];
    let mut out = Vec::new();
    for m in 0..=2 {
        for z in &fibers {
            out.push(trivial_fibration(&projective_space(m), z).unwrap());
        }
    }
    for a in 0..=2 {
        out.push(hirzebruch(a).unwrap());
    }
    let p2 = projective_space(2);
    let h = Cycle::from_labels(&p2, &[("h", 1)]).unwrap();
    let zero = Cycle::from_integers(&p2, &[0, 0, 0]).unwrap();
    out.push(projective_bundle_model(&p2, &[h, zero]).unwrap());
    out
}

fn battery() -> Vec<Arc<ChowRing>> {
    (0..=2).map(projective_space).collect()
}

fn pairing_conditions() -> Outcome {
    let mut rings: Vec<Arc<ChowRing>> = (0..=4).map(projective_space).collect();
    rings.push(grassmannian(2, 4).map_err(err)?);
    rings.push(grassmannian(2, 5).map_err(err)?);
    let factors = [projective_space(1), projective_space(2), grassmannian(2, 4).map_err(err)?];
    let mut products = Vec::new();
    for (i, a) in factors.iter().enumerate() {
        for b in &factors[i..] {
            products.push(kunneth_product(a, b));
        }
    }
    let mut literal = 0;
    for r in rings.iter().chain(&products) {
        let report = verify_pairing(r);
        ensure(report.passed(), || format!("{}: {:?}", r.name(), report.violations))?;
        if report.literal_identity() {
            literal += 1;
        }
    }
    for r in &rings {
        ensure(verify_pairing(r).literal_identity(), || format!("{}: a block is not the identity", r.name()))?;
    }
    Ok(format!(
        "{} rings, {} literal identity blocks, products checked against their dual involution",
        rings.len() + products.len(),
        literal
    ))
}

fn duality_pattern() -> Outcome {
    let mut r = rng(SEED);
    let mut triples = 0;
    for m in models() {
        ensure(validate_fibration(&m).passed(), || format!("{} does not validate", m.name()))?;
        let fiber = m.fiber().clone();
        let n = fiber.dimension();
        for _ in 0..20 {
            let alpha = random_cycle(m.base(), None, 10, &mut r);
            for a in 0..fiber.len() {
                for b in 0..fiber.len() {
                    let (p, i) = m.generator_index(a);
                    let (qd, j) = m.generator_index(b);
                    if p + qd > n {
                        continue;
                    }
                    let (got, outside) = duality_triple(&m, &alpha, (p, i), (qd, j)).map_err(err)?;
                    let expected = if fiber.dual(a) == b { alpha.clone() } else { Cycle::zero(m.base(), alpha.mode()) };
                    ensure(!outside && got == expected, || {
                        format!("{}: ({p},{i}),({qd},{j}) gave {got}, expected {expected}", m.name())
                    })?;
                    triples += 1;
                }
            }
        }
    }
    Ok(format!("{triples} triples"))
}

fn projector_family() -> Outcome {
    let mut checked = 0;
    for m in models() {
        let family = build_projector_family(&m).map_err(err)?;
        let report = verify_family(&family);
        ensure(report.passed(), || format!("{}: {:?}", m.name(), report.failures))?;
        let b = manin_battery(&m, &battery()).map_err(err)?;
        ensure(b.passed(), || format!("{}: battery {:?}", m.name(), b))?;
        checked += 1 + b.entries.len();
    }
    Ok(format!("{checked} families on Y and T×Y"))
}

fn action_formula() -> Outcome {
    let mut r = rng(SEED + 4);
    let mut samples = 0;
    for m in models() {
        let family = build_projector_family(&m).map_err(err)?;
        for _ in 0..100 {
            let p = r.gen_range_codim(m.dimension());
            let y = random_ycycle(&m, Some(p), 10, &mut r);
            for &(i, j) in family.order() {
                let g = m.generator((i, j)).map_err(err)?;
                let got = y.apply(family.operator((i, j)));
                let expected = if i <= p {
                    YCycle::from_components(&m, &[(g, y.component(g))]).map_err(err)?
                } else {
                    YCycle::zero(&m)
                };
                ensure(got == expected, || format!("{}: ρ_({i},{j}) on {y:?}", m.name()))?;
            }
            samples += 1;
        }
    }
    Ok(format!("{samples} random YCycles"))
}

trait CodimPick {
    fn gen_range_codim(&mut self, dim: usize) -> usize;
}

impl CodimPick for chowmot::random::SeededRng {
    fn gen_range_codim(&mut self, dim: usize) -> usize {
        use rand::Rng;
        self.gen_range(0..=dim)
    }
}

fn fiber_projector_system() -> Outcome {
    let zs: Vec<Arc<ChowRing>> = vec![
        projective_space(0),
        projective_space(1),
        projective_space(2),
        projective_space(3),
        grassmannian(2, 4).map_err(err)?,
    ];
    for z in &zs {
        let ps = fiber_projectors(z).map_err(err)?;
        let report = verify_projector_system(&ps).map_err(err)?;
        ensure(report.passed(), || format!("{}: {:?}", z.name(), report.failures))?;
        let mut sums = vec![0; z.dimension() + 1];
        for p in ps {
            for (c, r) in Motive::new(p).map_err(err)?.ranks().into_iter().enumerate() {
                sums[c] += r;
            }
        }
        ensure(sums == z.ranks(), || format!("{}: piece ranks {sums:?} vs {:?}", z.name(), z.ranks()))?;
    }
    Ok(format!("{} fibers", zs.len()))
}

fn tensor_identity() -> Outcome {
    let (p1, p2) = (projective_space(1), projective_space(2));
    let mut projectors = 0;
    for (x, z) in [(&p1, &p1), (&p2, &p1), (&p1, &p2)] {
        let report = tensor_identity_check(x, z).map_err(err)?;
        ensure(report.passed(), || format!("{:?}", report))?;
        projectors += report.checks.len();
    }
    Ok(format!("{projectors} projectors"))
}

fn motive_isomorphism() -> Outcome {
    let (f0, f2) = (hirzebruch(0).map_err(err)?, hirzebruch(2).map_err(err)?);
    let pair = motive_iso_pair(&f0, &f2).map_err(err)?;
    let report = pair.verify();
    ensure(report.passed(), || format!("{:?}", report.failures))?;
    // h_{i,j} sends Σ π^∗(α_{r,s}) T_{r,s} to π'^∗(α_{i,j}) T'_{i,j}
    let mut r = rng(SEED + 7);
    for _ in 0..20 {
        let y = random_ycycle(&f0, None, 10, &mut r);
        for (&idx, h) in &pair.forward {
            let g = f0.generator(idx).map_err(err)?;
            let got = YCycle::from_coords(&f2, h.apply(y.coords())).map_err(err)?;
            let expected = YCycle::from_components(&f2, &[(g, y.component(g))]).map_err(err)?;
            ensure(got == expected, || format!("h_{idx:?} on {y:?}"))?;
        }
    }
    Ok(format!("{} operator identities", report.checked))
}

fn six_identities_and_functoriality() -> Outcome {
    let mut checks = six_identities(SEED + 8, 100).map_err(err)?;
    checks.extend(functoriality(SEED + 9, 100).map_err(err)?);
    for c in &checks {
        ensure(c.passed() && c.samples >= 100, || format!("{}: {:?}", c.anchor, c.first_failure))?;
    }
    Ok(format!("{} identities × 100 samples", checks.len()))
}

fn ck_lift() -> Outcome {
    let cases = [
        hirzebruch(1).map_err(err)?,
        trivial_fibration(&projective_space(2), &projective_space(1)).map_err(err)?,
    ];
    let mut lines = Vec::new();
    for m in &cases {
        let base = cellular_ck(m.base()).map_err(err)?;
        let report = lift_and_verify(m, &base, &battery()).map_err(err)?;
        ensure(report.passed(), || format!("{}: {:?}", m.name(), report))?;
        lines.push(format!("{} ranks {:?}", m.name(), report.window.ranks()));
    }
    Ok(lines.join("; "))
}

fn oracle() -> Outcome {
    let rings = vec![projective_space(1), projective_space(2), grassmannian(2, 4).map_err(err)?];
    let checks = oracle_equivalence(&rings, SEED + 10, 100).map_err(err)?;
    for c in &checks {
        ensure(c.passed(), || format!("{}: {:?}", c.name, c.first_failure))?;
    }
    Ok(format!("{} ring pairs × 100", checks.len()))
}

fn rank_identity() -> Outcome {
    let mut all = models();
    for name in chowmot::catalog::standard_entries() {
        all.push(chowmot::catalog::lookup(&name).map_err(err)?.as_model().map_err(err)?);
    }
    for m in &all {
        let (x, z) = (m.base(), m.fiber());
        for p in 0..=m.dimension() {
            let formula: usize = (0..=p.min(z.dimension()))
                .map(|i| if p - i <= x.dimension() { z.rank(i) * x.rank(p - i) } else { 0 })
                .sum();
            ensure(m.ranks()[p] == formula, || format!("{} CH^{p}: {} vs {formula}", m.name(), m.ranks()[p]))?;
            let measured = pairing_rank(m, p).map_err(err)?;
            ensure(measured == formula, || format!("{} CH^{p}: pairing rank {measured} vs {formula}", m.name()))?;
        }
    }
    Ok(format!("{} models", all.len()))
}

fn littlewood_richardson() -> Outcome {
    let mut products = 0;
    for (k, n) in [(2, 4), (2, 5)] {
        let dim = k * (n - k);
        let parts: Vec<_> = (0..=dim).flat_map(|s| schubert::partitions_in_box(k, n - k, s)).collect();
        for a in &parts {
            for b in &parts {
                let lr: std::collections::BTreeMap<_, i64> =
                    schubert::schubert_product(k, n, a, b).into_iter().map(|(p, c)| (p, c as i64)).collect();
                let oracle = pieri::product(k, n, a, b);
                ensure(lr == oracle, || format!("Gr({k},{n}) {a:?}·{b:?}: {lr:?} vs {oracle:?}"))?;
                products += 1;
            }
        }
    }
    Ok(format!("{products} products"))
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);
    let criteria: [Criterion; 12] = [
        ("pairing conditions", pairing_conditions, Some(Duration::from_secs(5))),
        ("duality pattern", duality_pattern, Some(Duration::from_secs(10))),
        ("projector family", projector_family, Some(Duration::from_secs(30))),
        ("action formula", action_formula, None),
        ("fiber projector system", fiber_projector_system, None),
        ("tensor identity", tensor_identity, None),
        ("motive isomorphism", motive_isomorphism, None),
        ("six identities and functoriality", six_identities_and_functoriality, None),
        ("Chow-Kunneth lift", ck_lift, Some(Duration::from_secs(30))),
        ("composition oracle", oracle, None),
        ("rank identity", rank_identity, None),
        ("Littlewood-Richardson vs Pieri", littlewood_richardson, None),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match (outcome, limit) {
            (Ok(_), Some(l)) if elapsed > *l => Err(format!("took {:.2?}, limit {:.0?}", elapsed, l)),
            (o, _) => o,
        };
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({elapsed:.2?})", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} ({elapsed:.2?})", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
