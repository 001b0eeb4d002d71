//! Built-in cellular varieties and fibration models.

pub mod morphisms;
pub mod pieri;
pub mod schubert;

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::fibration::{require_valid, trivial_fibration, FibrationModel};
use crate::ring::{require_pairing, BasisCell, ChowRing, Cycle, RingData};

/// Default bound on `k(n−k)` for [`grassmannian`].
pub const GRASSMANNIAN_GUARD: usize = 8;

fn power_label(p: usize) -> String {
    match p {
        0 => "1".into(),
        1 => "h".into(),
        _ => format!("h^{p}"),
    }
}

/// `CH^∗(P^n) = Z[h]/(h^{n+1})`.
pub fn projective_space(n: usize) -> Arc<ChowRing> {
    let cells = (0..=n).map(|p| BasisCell::new(p, 1, power_label(p)).with_cell_dim(n - p)).collect();
    let mut products = BTreeMap::new();
    for a in 1..=n {
        for b in a..=n - a {
            products.insert((a, b), vec![(a + b, BigInt::one())]);
        }
    }
    let name = if n == 0 { "point".to_string() } else { format!("P{n}") };
    ChowRing::from_data(RingData { name, dimension: n, cells, products, dual: None })
        .expect("projective space data is well formed")
}

pub fn grassmannian(k: usize, n: usize) -> Result<Arc<ChowRing>> {
    grassmannian_with_guard(k, n, GRASSMANNIAN_GUARD)
}

/// Schubert basis of `Gr(k, n)`, multiplied by Littlewood–Richardson counts.
///
/// Codim-`p` partitions are listed in descending lex order for `2p ≤ dim`;
/// above the middle they are listed as complements of the lower list, so the
/// dual of `τ_{p,i}` is `τ_{dim−p,i}`.
pub fn grassmannian_with_guard(k: usize, n: usize, guard: usize) -> Result<Arc<ChowRing>> {
    if k == 0 || k >= n {
        return Err(Error::Guard(format!("Gr({k},{n}) needs 0 < k < n")));
    }
    let width = n - k;
    let dim = k * width;
    if dim > guard {
        return Err(Error::Guard(format!("Gr({k},{n}) has dimension {dim} above the guard {guard}")));
    }
    let mut by_codim: Vec<Vec<schubert::Partition>> = vec![Vec::new(); dim + 1];
    for p in 0..=dim {
        if 2 * p <= dim {
            by_codim[p] = schubert::partitions_in_box(k, width, p);
        }
    }
    for p in 0..=dim {
        if 2 * p > dim {
            by_codim[p] = by_codim[dim - p].iter().map(|l| schubert::complement(l, k, width)).collect();
        }
    }
    let parts: Vec<schubert::Partition> = by_codim.iter().flatten().cloned().collect();
    let pos: BTreeMap<schubert::Partition, usize> = parts.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
    let mut cells = Vec::new();
    for (p, list) in by_codim.iter().enumerate() {
        for (i, l) in list.iter().enumerate() {
            cells.push(BasisCell::new(p, i + 1, schubert::label(l)).with_cell_dim(dim - p));
        }
    }
    let mut products = BTreeMap::new();
    for (a, la) in parts.iter().enumerate() {
        for (b, lb) in parts.iter().enumerate().skip(a) {
            if schubert::size(la) == 0 || schubert::size(lb) == 0 {
                continue;
            }
            let terms: Vec<(usize, BigInt)> = schubert::schubert_product(k, n, la, lb)
                .into_iter()
                .map(|(nu, c)| (pos[&nu], BigInt::from(c)))
                .collect();
            products.insert((a, b), terms);
        }
    }
    let dual = parts.iter().map(|l| pos[&schubert::complement(l, k, width)]).collect();
    let ring = ChowRing::from_data(RingData {
        name: format!("Gr({k},{n})"),
        dimension: dim,
        cells,
        products,
        dual: Some(dual),
    })?;
    require_pairing(&ring)?;
    Ok(ring)
}

/// Fibration `P(E) → X` for a rank-`r` bundle with Chern classes `c_1..c_r`.
///
/// The generators are `T_{p,1} = ξ^p` for `p < r`, closed under
/// `ξ^r = −Σ π^∗(c_i) ξ^{r−i}`. The duality constraint only involves
/// products `ξ^a ξ^b` with `a + b = r − 1`, which the relation never
/// touches, so the triangular normalization has the trivial solution; it is
/// still checked and a failure is reported.
pub fn projective_bundle_model(base: &Arc<ChowRing>, chern: &[Cycle]) -> Result<Arc<FibrationModel>> {
    let r = chern.len();
    if r == 0 {
        return Err(Error::InvalidModel("a projective bundle needs rank at least 1".into()));
    }
    for (i, c) in chern.iter().enumerate() {
        if c.ring().as_ref() != base.as_ref() {
            return Err(Error::RingMismatch(format!("c_{} is not a class on {}", i + 1, base.name())));
        }
        if !c.is_zero() && c.homogeneous_codim() != Some(i + 1) {
            return Err(Error::NotHomogeneous(format!("c_{} must lie in CH^{}", i + 1, i + 1)));
        }
    }
    let fiber = projective_space(r - 1);
    // powers[k][p] is the base coefficient of ξ^p in ξ^k
    let zero = Cycle::zero(base, crate::ring::CoeffMode::Integer);
    let mut powers: Vec<Vec<Cycle>> = Vec::new();
    let mut current: Vec<Cycle> = (0..r).map(|p| if p == 0 { Cycle::unit(base) } else { zero.clone() }).collect();
    for _ in 0..=2 * (r - 1) {
        powers.push(current.clone());
        // multiply by ξ
        let top = current[r - 1].clone();
        let mut next = vec![zero.clone(); r];
        next[1..r].clone_from_slice(&current[..r - 1]);
        if !top.is_zero() {
            for (i, c) in chern.iter().enumerate() {
                let term = top.mul(c)?.scale(&-BigRational::one());
                next[r - 1 - i] = next[r - 1 - i].add(&term)?;
            }
        }
        current = next;
    }
    let mut entries = Vec::new();
    for a in 0..r {
        for b in 0..r {
            let comps = powers[a + b]
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(p, c)| (p, c.clone()))
                .collect();
            entries.push(((a, b), comps));
        }
    }
    let name = if chern.iter().all(Cycle::is_zero) {
        format!("{}×{}", base.name(), fiber.name())
    } else {
        format!("P(E) over {}", base.name())
    };
    let model = FibrationModel::from_table(name, base.clone(), fiber, entries)?;
    for a in 0..r {
        let b = r - 1 - a;
        let top = &powers[a + b][r - 1];
        if *top != Cycle::unit(base) {
            return Err(Error::InvalidModel(format!(
                "no integral normalization: π_∗(ξ^{a} ξ^{b}) = {top}, expected 1"
            )));
        }
    }
    require_valid(&model)?;
    Ok(model)
}

/// `F_a`: the `P^1`-bundle over `P^1` with `T_{1,1}^2 = −a π^∗(h) T_{1,1}`.
pub fn hirzebruch(a: i64) -> Result<Arc<FibrationModel>> {
    let p1 = projective_space(1);
    let c1 = Cycle::from_labels(&p1, &[("h", a)])?;
    let c2 = Cycle::zero(&p1, crate::ring::CoeffMode::Integer);
    let model = projective_bundle_model(&p1, &[c1, c2])?;
    rename(&model, format!("F{a}"))
}

pub fn product_model(base: &Arc<ChowRing>, fiber: &Arc<ChowRing>) -> Result<Arc<FibrationModel>> {
    trivial_fibration(base, fiber)
}

fn rename(model: &Arc<FibrationModel>, name: String) -> Result<Arc<FibrationModel>> {
    let (m, nb) = (model.fiber().len(), model.base().len());
    let mut entries = Vec::new();
    for g in 0..m {
        for h in 0..m {
            let prod = model.product_coords(g, h);
            let comps = (0..m)
                .map(|k| {
                    let coeffs = prod[k * nb..(k + 1) * nb].to_vec();
                    Cycle::from_coeffs(model.base(), crate::ring::CoeffMode::Rational, coeffs).map(|c| (k, c))
                })
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .collect();
            entries.push(((g, h), comps));
        }
    }
    FibrationModel::from_table(name, model.base().clone(), model.fiber().clone(), entries)
}

/// A catalog entry resolved by name.
#[derive(Debug, Clone)]
pub enum CatalogItem {
    Ring(Arc<ChowRing>),
    Model(Arc<FibrationModel>),
}

impl CatalogItem {
    pub fn name(&self) -> String {
        match self {
            CatalogItem::Ring(r) => r.name().to_string(),
            CatalogItem::Model(m) => m.name().to_string(),
        }
    }

    /// A ring is read as the trivial fibration over a point.
    pub fn as_model(&self) -> Result<Arc<FibrationModel>> {
        match self {
            CatalogItem::Ring(r) => trivial_fibration(&projective_space(0), r),
            CatalogItem::Model(m) => Ok(m.clone()),
        }
    }
}

/// Names understood by [`lookup`], with a short description each.
pub fn entries() -> Vec<(&'static str, &'static str)> {
    vec![
        ("point", "the point"),
        ("p<n>", "projective space P^n, e.g. p2"),
        ("gr<k><n>", "Grassmannian Gr(k,n), e.g. gr24 (dimension at most 8)"),
        ("hirzebruch:<a>", "Hirzebruch surface F_a over P^1"),
        ("product:<X>,<Z>", "trivial fibration X × Z over X"),
        ("pbundle:<X>:<c1>", "P(E) for a rank-2 bundle on X = p<n> with c_1 = c1·h, c_2 = 0"),
    ]
}

/// The listing used by `chowmot catalog`.
pub fn standard_entries() -> Vec<String> {
    let mut names: Vec<String> = vec!["point".into()];
    names.extend((1..=4).map(|n| format!("p{n}")));
    names.extend(["gr24", "gr25", "hirzebruch:0", "hirzebruch:1", "hirzebruch:2", "product:p1,p1", "product:p2,p1", "pbundle:p2:1"].map(String::from));
    names
}

pub fn lookup_ring(name: &str) -> Result<Arc<ChowRing>> {
    match lookup(name)? {
        CatalogItem::Ring(r) => Ok(r),
        CatalogItem::Model(_) => Err(Error::UnknownName(format!("{name} is a fibration model, not a ring"))),
    }
}

pub fn lookup(name: &str) -> Result<CatalogItem> {
    let name = name.trim();
    let unknown = || Error::UnknownName(name.to_string());
    if name == "point" {
        return Ok(CatalogItem::Ring(projective_space(0)));
    }
    if let Some(rest) = name.strip_prefix("hirzebruch:") {
        let a: i64 = rest.parse().map_err(|_| unknown())?;
        return Ok(CatalogItem::Model(hirzebruch(a)?));
    }
    if let Some(rest) = name.strip_prefix("product:") {
        let (x, z) = rest.split_once(',').ok_or_else(unknown)?;
        return Ok(CatalogItem::Model(product_model(&lookup_ring(x)?, &lookup_ring(z)?)?));
    }
    if let Some(rest) = name.strip_prefix("pbundle:") {
        let (x, c) = rest.split_once(':').ok_or_else(unknown)?;
        let base = lookup_ring(x)?;
        let c1: i64 = c.parse().map_err(|_| unknown())?;
        let h = base.position(1, 1).ok_or_else(|| Error::InvalidModel(format!("{x} has no CH^1")))?;
        let mut chern1 = Cycle::zero(&base, crate::ring::CoeffMode::Integer);
        if !c1.is_zero() {
            chern1 = Cycle::basis(&base, h).scale(&BigRational::from_integer(c1.into()));
        }
        let chern2 = Cycle::zero(&base, crate::ring::CoeffMode::Integer);
        return Ok(CatalogItem::Model(projective_bundle_model(&base, &[chern1, chern2])?));
    }
    if let Some(rest) = name.strip_prefix("gr") {
        let digits: Vec<usize> = rest.chars().map(|c| c.to_digit(10).map(|d| d as usize)).collect::<Option<_>>().ok_or_else(unknown)?;
        if digits.len() != 2 {
            return Err(unknown());
        }
        return Ok(CatalogItem::Ring(grassmannian(digits[0], digits[1])?));
    }
    if let Some(rest) = name.strip_prefix('p') {
        let n: usize = rest.parse().map_err(|_| unknown())?;
        return Ok(CatalogItem::Ring(projective_space(n)));
    }
    Err(unknown())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fibration::validate_fibration;
    use crate::ring::verify_pairing;

    #[test]
    fn projective_spaces_pass_pairing() {
        for n in 0..=4 {
            let r = verify_pairing(&projective_space(n));
            assert!(r.passed() && r.literal_identity(), "P{n}");
        }
        assert_eq!(projective_space(0).len(), 1);
    }

    #[test]
    fn gr24_products() {
        let g = grassmannian(2, 4).unwrap();
        let s1 = Cycle::from_labels(&g, &[("s[1]", 1)]).unwrap();
        let s21 = Cycle::from_labels(&g, &[("s[2,1]", 1)]).unwrap();
        assert_eq!(s1.mul(&s21).unwrap(), Cycle::from_labels(&g, &[("s[2,2]", 1)]).unwrap());
        let s2 = Cycle::from_labels(&g, &[("s[2]", 1)]).unwrap();
        assert_eq!(s2.mul(&s2).unwrap().degree(), BigRational::one());
        let labels: Vec<&str> = g.cells().iter().map(|c| c.label.as_str()).collect();
        assert_eq!(labels, ["1", "s[1]", "s[2]", "s[1,1]", "s[2,1]", "s[2,2]"]);
    }

    #[test]
    fn gr13_is_p2() {
        let g = grassmannian(1, 3).unwrap();
        let p = projective_space(2);
        assert_eq!(g.ranks(), p.ranks());
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(g.product_terms(i, j), p.product_terms(i, j));
            }
        }
    }

    #[test]
    fn guard_rejects_large() {
        assert!(matches!(grassmannian(3, 6), Err(Error::Guard(_))));
        assert!(grassmannian_with_guard(3, 6, 9).is_ok());
        assert!(grassmannian(0, 3).is_err());
    }

    #[test]
    fn gr25_cell_layout() {
        let g = grassmannian(2, 5).unwrap();
        assert_eq!(g.ranks(), vec![1, 1, 2, 2, 2, 1, 1]);
        assert!(verify_pairing(&g).literal_identity());
    }

    #[test]
    fn hirzebruch_relation() {
        for a in 0..=2 {
            let m = hirzebruch(a).unwrap();
            let t = m.product_coords(1, 1).to_vec();
            // ξ² = −a π^∗(h) ξ: coordinate (generator 1, base cell h)
            let mut expect = vec![BigRational::zero(); 4];
            expect[m.coord(1, 1)] = BigRational::from_integer((-a).into());
            assert_eq!(t, expect);
            assert!(validate_fibration(&m).passed());
        }
    }

    #[test]
    fn hirzebruch_zero_is_trivial() {
        let h0 = hirzebruch(0).unwrap();
        let p1 = projective_space(1);
        let t = product_model(&p1, &p1).unwrap();
        for g in 0..2 {
            for h in 0..2 {
                assert_eq!(h0.product_coords(g, h), t.product_coords(g, h));
            }
        }
    }

    #[test]
    fn bundle_over_p2_ranks() {
        let m = match lookup("pbundle:p2:1").unwrap() {
            CatalogItem::Model(m) => m,
            CatalogItem::Ring(_) => unreachable!(),
        };
        assert_eq!(m.ranks(), vec![1, 2, 2, 1]);
    }

    #[test]
    fn zero_chern_classes_give_product() {
        let p2 = projective_space(2);
        let z = Cycle::zero(&p2, crate::ring::CoeffMode::Integer);
        let m = projective_bundle_model(&p2, &[z.clone(), z.clone(), z]).unwrap();
        let t = trivial_fibration(&p2, &projective_space(2)).unwrap();
        for g in 0..3 {
            for h in 0..3 {
                assert_eq!(m.product_coords(g, h), t.product_coords(g, h));
            }
        }
    }

    #[test]
    fn names_resolve() {
        for name in standard_entries() {
            assert!(lookup(&name).is_ok(), "{name}");
        }
        assert!(matches!(lookup("q7"), Err(Error::UnknownName(_))));
        assert!(matches!(lookup("gr36"), Err(Error::Guard(_))));
    }
}
