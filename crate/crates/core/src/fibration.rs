//! Locally trivial fibrations `π: Y → X` with cellular fiber `Z`.
//!
//! `CH^∗(Y)` is presented as a free `CH^∗(X)`-module on generators `T_{p,i}`,
//! one per fiber cell, with a user-supplied product table
//! `T_g · T_h = Σ_k π^∗(c^k_{gh}) · T_k`. The coordinates of a class are its
//! base components: the basis element `(g, x)` is `π^∗(τ_x) · T_g`.
//!
//! Operators on `CH^∗(Y)` (projectors, motive morphisms, Chow–Künneth
//! components) are exact matrices in these coordinates.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::ring::{ensure_same, external_product, kunneth_product, verify_pairing, ChowRing, CoeffMode, Cycle};

/// Linear endomorphism of `CH^∗(Y)` in generator coordinates.
pub type YOperator = Matrix;

/// A generator `T_{codim,index}`, addressed like the fiber cell it mirrors.
pub type GenIndex = (usize, usize);

pub struct FibrationModel {
    name: String,
    base: Arc<ChowRing>,
    fiber: Arc<ChowRing>,
    /// `t_table[g * m + h]` holds `T_g · T_h` in Y coordinates.
    t_table: Vec<Vec<BigRational>>,
    gen_mult: Vec<Matrix>,
}

impl fmt::Debug for FibrationModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FibrationModel")
            .field("name", &self.name)
            .field("base", &self.base.name())
            .field("fiber", &self.fiber.name())
            .finish()
    }
}

/// One entry `T_left · T_right = Σ π^∗(cycle) · T_generator` of a product table.
pub type TableEntry = ((usize, usize), Vec<(usize, Cycle)>);

impl FibrationModel {
    /// Builds a model from products keyed by fiber cell positions.
    ///
    /// Missing products involving the unit generator follow the unit law;
    /// other missing products are taken from the symmetric entry, or zero.
    /// No validity checks are run here; see [`validate_fibration`].
    pub fn from_table(
        name: impl Into<String>,
        base: Arc<ChowRing>,
        fiber: Arc<ChowRing>,
        entries: Vec<TableEntry>,
    ) -> Result<Arc<FibrationModel>> {
        let m = fiber.len();
        let nb = base.len();
        let mut table: Vec<Option<Vec<BigRational>>> = vec![None; m * m];
        for ((g, h), components) in entries {
            if g >= m || h >= m {
                return Err(Error::InvalidModel("product refers to an unknown generator".into()));
            }
            let mut v = vec![BigRational::zero(); m * nb];
            for (k, cycle) in components {
                if k >= m {
                    return Err(Error::InvalidModel("component refers to an unknown generator".into()));
                }
                ensure_same(&base, cycle.ring(), "product table coefficient")?;
                for x in cycle.support() {
                    v[k * nb + x] += cycle.coeff(x);
                }
            }
            if table[g * m + h].is_some() {
                return Err(Error::InvalidModel(format!(
                    "product {} * {} given twice",
                    fiber.cell(g).label,
                    fiber.cell(h).label
                )));
            }
            table[g * m + h] = Some(v);
        }
        let unit = fiber.unit_cell();
        for g in 0..m {
            for h in 0..m {
                if table[g * m + h].is_none() {
                    if let Some(v) = table[h * m + g].clone() {
                        table[g * m + h] = Some(v);
                    } else if g == unit || h == unit {
                        let other = if g == unit { h } else { g };
                        let mut v = vec![BigRational::zero(); m * nb];
                        v[other * nb + base.unit_cell()] = BigRational::one();
                        table[g * m + h] = Some(v);
                    }
                }
            }
        }
        let t_table: Vec<Vec<BigRational>> =
            table.into_iter().map(|v| v.unwrap_or_else(|| vec![BigRational::zero(); m * nb])).collect();
        let mut model = FibrationModel { name: name.into(), base, fiber, t_table, gen_mult: Vec::new() };
        model.gen_mult = (0..m).map(|g| model.build_gen_mult(g)).collect();
        Ok(Arc::new(model))
    }

    fn build_gen_mult(&self, g: usize) -> Matrix {
        let (m, nb) = (self.fiber.len(), self.base.len());
        let mut out = Matrix::zeros(m * nb, m * nb);
        for h in 0..m {
            let prod = &self.t_table[g * m + h];
            for y in 0..nb {
                // π^∗(τ_y) T_h ↦ π^∗(τ_y) · T_g T_h
                for k in 0..m {
                    for x in 0..nb {
                        let c = &prod[k * nb + x];
                        if c.is_zero() {
                            continue;
                        }
                        for (z, w) in self.base.product_terms(y, x) {
                            out.add_at(k * nb + z, h * nb + y, &(c * BigRational::from_integer(w.clone())));
                        }
                    }
                }
            }
        }
        out
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn base(&self) -> &Arc<ChowRing> {
        &self.base
    }

    pub fn fiber(&self) -> &Arc<ChowRing> {
        &self.fiber
    }

    /// `n = dim Z`.
    pub fn fiber_dim(&self) -> usize {
        self.fiber.dimension()
    }

    /// `dim Y = dim X + dim Z`.
    pub fn dimension(&self) -> usize {
        self.base.dimension() + self.fiber.dimension()
    }

    /// Number of Y coordinates.
    pub fn len(&self) -> usize {
        self.base.len() * self.fiber.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Coordinate of `π^∗(τ_x) · T_g`.
    pub fn coord(&self, generator: usize, base_cell: usize) -> usize {
        generator * self.base.len() + base_cell
    }

    /// Inverse of [`coord`](Self::coord).
    pub fn split(&self, coord: usize) -> (usize, usize) {
        (coord / self.base.len(), coord % self.base.len())
    }

    pub fn codim_of(&self, coord: usize) -> usize {
        let (g, x) = self.split(coord);
        self.fiber.codim_of(g) + self.base.codim_of(x)
    }

    pub fn generator(&self, g: GenIndex) -> Result<usize> {
        self.fiber
            .position(g.0, g.1)
            .ok_or_else(|| Error::OutOfRange(format!("no generator T_{{{},{}}}", g.0, g.1)))
    }

    pub fn generator_index(&self, g: usize) -> GenIndex {
        let c = self.fiber.cell(g);
        (c.codim, c.index)
    }

    /// `T_{n−i,j}` for `T_{i,j}` under the fiber's dual map.
    pub fn dual_generator(&self, g: usize) -> usize {
        self.fiber.dual(g)
    }

    /// `T_g · T_h`.
    pub fn product_coords(&self, g: usize, h: usize) -> &[BigRational] {
        &self.t_table[g * self.fiber.len() + h]
    }

    /// Multiplication by `T_g`.
    pub fn gen_mult(&self, g: usize) -> &Matrix {
        &self.gen_mult[g]
    }

    /// Multiplication by `π^∗(α)`.
    pub fn base_mult(&self, alpha: &Cycle) -> Result<Matrix> {
        ensure_same(&self.base, alpha.ring(), "base multiplication")?;
        let (m, nb) = (self.fiber.len(), self.base.len());
        let mut out = Matrix::zeros(m * nb, m * nb);
        for a in alpha.support() {
            for h in 0..m {
                for y in 0..nb {
                    for (z, w) in self.base.product_terms(a, y) {
                        out.add_at(h * nb + z, h * nb + y, &(alpha.coeff(a) * BigRational::from_integer(w.clone())));
                    }
                }
            }
        }
        Ok(out)
    }

    /// `π_∗`: the component of the point generator `T_{n,1}`.
    pub fn push_matrix(&self) -> Matrix {
        let (nb, top) = (self.base.len(), self.fiber.point_cell());
        let mut out = Matrix::zeros(nb, self.len());
        for x in 0..nb {
            out.set(x, top * nb + x, BigRational::one());
        }
        out
    }

    /// `π^∗`: `α ↦ α ⊗ T_{0,1}`.
    pub fn pull_matrix(&self) -> Matrix {
        let (nb, unit) = (self.base.len(), self.fiber.unit_cell());
        let mut out = Matrix::zeros(self.len(), nb);
        for x in 0..nb {
            out.set(unit * nb + x, x, BigRational::one());
        }
        out
    }

    /// Total rank of `CH^p(Y)` per codim, counted on coordinates.
    pub fn ranks(&self) -> Vec<usize> {
        let mut ranks = vec![0; self.dimension() + 1];
        for c in 0..self.len() {
            ranks[self.codim_of(c)] += 1;
        }
        ranks
    }

    /// Coordinate ranges are not contiguous by codim, so this lists them.
    pub fn coords_in_codim(&self, p: usize) -> Vec<usize> {
        (0..self.len()).filter(|&c| self.codim_of(c) == p).collect()
    }
}

/// A class in `CH^∗(Y)` given by its base components.
#[derive(Clone)]
pub struct YCycle {
    model: Arc<FibrationModel>,
    coeffs: Vec<BigRational>,
}

impl PartialEq for YCycle {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.model, &other.model) && self.coeffs == other.coeffs
    }
}

impl fmt::Debug for YCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for g in 0..self.model.fiber.len() {
            let comp = self.component(g);
            if !comp.is_zero() {
                terms.push(format!("π^∗({comp})·T[{}]", self.model.fiber.cell(g).label));
            }
        }
        write!(f, "YCycle[{}]({})", self.model.name, if terms.is_empty() { "0".into() } else { terms.join(" + ") })
    }
}

impl YCycle {
    pub fn zero(model: &Arc<FibrationModel>) -> YCycle {
        YCycle { model: model.clone(), coeffs: vec![BigRational::zero(); model.len()] }
    }

    pub fn from_coords(model: &Arc<FibrationModel>, coeffs: Vec<BigRational>) -> Result<YCycle> {
        if coeffs.len() != model.len() {
            return Err(Error::RingMismatch(format!("{} coordinates for model {}", coeffs.len(), model.name)));
        }
        Ok(YCycle { model: model.clone(), coeffs })
    }

    /// `Σ π^∗(α_g) · T_g`.
    pub fn from_components(model: &Arc<FibrationModel>, components: &[(usize, Cycle)]) -> Result<YCycle> {
        let mut y = YCycle::zero(model);
        for (g, alpha) in components {
            ensure_same(&model.base, alpha.ring(), "YCycle component")?;
            for x in alpha.support() {
                y.coeffs[model.coord(*g, x)] += alpha.coeff(x);
            }
        }
        Ok(y)
    }

    /// The generator `T_g` itself.
    pub fn generator(model: &Arc<FibrationModel>, g: usize) -> YCycle {
        let mut y = YCycle::zero(model);
        y.coeffs[model.coord(g, model.base.unit_cell())] = BigRational::one();
        y
    }

    pub fn model(&self) -> &Arc<FibrationModel> {
        &self.model
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// The base class `α_g` in front of `T_g`.
    pub fn component(&self, g: usize) -> Cycle {
        let nb = self.model.base.len();
        let coeffs = self.coeffs[g * nb..(g + 1) * nb].to_vec();
        Cycle::from_coeffs(&self.model.base, CoeffMode::Rational, coeffs).expect("component length")
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn homogeneous_codim(&self) -> Option<usize> {
        let mut codims =
            self.coeffs.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(c, _)| self.model.codim_of(c));
        let first = codims.next()?;
        codims.all(|c| c == first).then_some(first)
    }

    pub fn apply(&self, op: &YOperator) -> YCycle {
        YCycle { model: self.model.clone(), coeffs: op.apply(&self.coeffs) }
    }

    pub fn add(&self, other: &YCycle) -> YCycle {
        YCycle {
            model: self.model.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    /// Product in `CH^∗(Y)`.
    pub fn mul(&self, other: &YCycle) -> Result<YCycle> {
        if !Arc::ptr_eq(&self.model, &other.model) {
            return Err(Error::RingMismatch("YCycles from different models".into()));
        }
        let model = &self.model;
        let nb = model.base.len();
        let mut out = vec![BigRational::zero(); model.len()];
        for (c, u) in self.coeffs.iter().enumerate() {
            if u.is_zero() {
                continue;
            }
            let (g, x) = model.split(c);
            let w = model.gen_mult[g].apply(&other.coeffs);
            for (d, v) in w.iter().enumerate() {
                if v.is_zero() {
                    continue;
                }
                let (k, y) = model.split(d);
                for (z, t) in model.base.product_terms(x, y) {
                    out[k * nb + z] += u * v * BigRational::from_integer(t.clone());
                }
            }
        }
        Ok(YCycle { model: model.clone(), coeffs: out })
    }
}

/// `X × Z` with the fiber's own products and coefficients `1_X`.
pub fn trivial_fibration(base: &Arc<ChowRing>, fiber: &Arc<ChowRing>) -> Result<Arc<FibrationModel>> {
    let mut entries = Vec::new();
    for g in 0..fiber.len() {
        for h in 0..fiber.len() {
            let components = fiber
                .product_terms(g, h)
                .iter()
                .map(|(k, c)| (*k, Cycle::unit(base).scale(&BigRational::from_integer(c.clone()))))
                .collect();
            entries.push(((g, h), components));
        }
    }
    FibrationModel::from_table(format!("{}×{}", base.name(), fiber.name()), base.clone(), fiber.clone(), entries)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelViolation {
    pub check: String,
    pub location: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub model: String,
    pub violations: Vec<ModelViolation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Grading, unit, fiber restriction, commutativity, associativity and the
/// duality constraint (`T_{n,1}`-component of `T_{p,i} · T_{n−p,j}` is `δ_{ij} 1_X`).
pub fn validate_fibration(model: &Arc<FibrationModel>) -> ValidationReport {
    let mut violations = Vec::new();
    let mut flag = |check: &str, location: String, detail: String| {
        violations.push(ModelViolation { check: check.into(), location, detail });
    };
    let (base, fiber) = (&model.base, &model.fiber);
    let (m, nb, n) = (fiber.len(), base.len(), fiber.dimension());
    let lbl = |g: usize| fiber.cell(g).label.clone();

    let pairing = verify_pairing(fiber);
    if !pairing.passed() {
        flag("fiber pairing", fiber.name().into(), format!("{} pairing violations", pairing.violations.len()));
    }

    for g in 0..m {
        for h in 0..m {
            let prod = model.product_coords(g, h);
            let loc = format!("T[{}]·T[{}]", lbl(g), lbl(h));
            let want = fiber.codim_of(g) + fiber.codim_of(h);
            for (c, v) in prod.iter().enumerate() {
                if !v.is_zero() && model.codim_of(c) != want {
                    let (k, x) = model.split(c);
                    flag(
                        "grading",
                        loc.clone(),
                        format!("term π^∗({})·T[{}] has codim {}, expected {want}", base.cell(x).label, lbl(k), model.codim_of(c)),
                    );
                }
            }
            // restriction to a fiber recovers the fiber's own product
            for k in 0..m {
                if fiber.codim_of(k) != want {
                    continue;
                }
                let got = &prod[k * nb + base.unit_cell()];
                let expect = fiber
                    .product_terms(g, h)
                    .iter()
                    .find(|(c, _)| *c == k)
                    .map(|(_, v)| BigRational::from_integer(v.clone()))
                    .unwrap_or_default();
                if *got != expect {
                    flag("fiber restriction", loc.clone(), format!("coefficient of T[{}] is {got}, fiber has {expect}", lbl(k)));
                }
            }
            if g == fiber.unit_cell() {
                let unit = YCycle::generator(model, h);
                if prod != unit.coords() {
                    flag("unit", loc.clone(), "T_{0,1} is not a unit".into());
                }
            }
            if g < h && prod != model.product_coords(h, g) {
                flag("commutativity", loc.clone(), format!("differs from T[{}]·T[{}]", lbl(h), lbl(g)));
            }
            if want == n {
                let top = fiber.point_cell();
                let comp: Vec<BigRational> = prod[top * nb..(top + 1) * nb].to_vec();
                let mut expect = vec![BigRational::zero(); nb];
                if fiber.dual(g) == h {
                    expect[base.unit_cell()] = BigRational::one();
                }
                if comp != expect {
                    let c = Cycle::from_coeffs(base, CoeffMode::Rational, comp).expect("length");
                    flag(
                        "duality",
                        loc.clone(),
                        format!("T_{{n,1}}-component is {c}, expected {}", if fiber.dual(g) == h { "1" } else { "0" }),
                    );
                }
            }
        }
    }

    // associativity on generator triples
    let gens: Vec<YCycle> = (0..m).map(|g| YCycle::generator(model, g)).collect();
    for g in 0..m {
        for h in 0..m {
            let gh = gens[g].mul(&gens[h]).expect("same model");
            for k in 0..m {
                let left = gh.mul(&gens[k]).expect("same model");
                let right = gens[g].mul(&gens[h].mul(&gens[k]).expect("same model")).expect("same model");
                if left != right {
                    flag("associativity", format!("T[{}]·T[{}]·T[{}]", lbl(g), lbl(h), lbl(k)), "bracketings differ".into());
                }
            }
        }
    }

    ValidationReport { model: model.name.clone(), violations }
}

pub fn require_valid(model: &Arc<FibrationModel>) -> Result<()> {
    let report = validate_fibration(model);
    match report.violations.first() {
        None => Ok(()),
        Some(v) => Err(Error::InvalidModel(format!(
            "{}: {} violation(s), first: {} at {}: {}",
            model.name,
            report.violations.len(),
            v.check,
            v.location,
            v.detail
        ))),
    }
}

/// `π^∗(a) = a ⊗ T_{0,1}`.
pub fn pullback(model: &Arc<FibrationModel>, a: &Cycle) -> Result<YCycle> {
    YCycle::from_components(model, &[(model.fiber.unit_cell(), a.clone())])
}

/// `π_∗(y)`: the `T_{n,1}`-component, with codim dropping by `n`.
pub fn pushforward(model: &Arc<FibrationModel>, y: &YCycle) -> Result<Cycle> {
    if !Arc::ptr_eq(model, &y.model) {
        return Err(Error::RingMismatch("pushforward of a YCycle from another model".into()));
    }
    let comp = y.component(model.fiber.point_cell());
    let integral = comp.coeffs().iter().all(|v| v.is_integer());
    Ok(if integral { comp.to_integer()? } else { comp })
}

/// `π_∗(π^∗(a) · T_{p,i} · T_{q,j})` and whether `p + q > n`, which is
/// outside the range where the δ-pattern is guaranteed.
pub fn duality_triple(model: &Arc<FibrationModel>, a: &Cycle, left: GenIndex, right: GenIndex) -> Result<(Cycle, bool)> {
    let g = model.generator(left)?;
    let h = model.generator(right)?;
    let y = pullback(model, a)?
        .mul(&YCycle::generator(model, g))?
        .mul(&YCycle::generator(model, h))?;
    Ok((pushforward(model, &y)?, left.0 + right.0 > model.fiber_dim()))
}

/// Replays the injectivity argument: at the lexicographically greatest
/// generator `(k,l)` with a nonzero component, multiplying by `T_{n−k,l}` and
/// pushing forward recovers that component.
pub fn recover_leading_component(y: &YCycle) -> Result<Option<(GenIndex, Cycle)>> {
    let model = &y.model;
    let leading = (0..model.fiber.len())
        .filter(|&g| !y.component(g).is_zero())
        .max_by_key(|&g| model.generator_index(g));
    let Some(g) = leading else { return Ok(None) };
    let dual = YCycle::generator(model, model.dual_generator(g));
    let recovered = pushforward(model, &y.mul(&dual)?)?;
    Ok(Some((model.generator_index(g), recovered)))
}

/// `W_{i,j} = {(i,l) : j < l ≤ m_i} ∪ {(k,l) : k > i, 1 ≤ l ≤ m_k}`.
pub fn w_set(fiber: &ChowRing, (i, j): GenIndex) -> Vec<GenIndex> {
    let mut out: Vec<GenIndex> = (j + 1..=fiber.rank(i)).map(|l| (i, l)).collect();
    for k in i + 1..=fiber.dimension() {
        out.extend((1..=fiber.rank(k)).map(|l| (k, l)));
    }
    out
}

/// `ρ_{i,j}` for all generators, built by downward induction.
#[derive(Clone)]
pub struct ProjectorFamily {
    model: Arc<FibrationModel>,
    order: Vec<GenIndex>,
    operators: BTreeMap<GenIndex, YOperator>,
    w_sets: BTreeMap<GenIndex, Vec<GenIndex>>,
}

impl fmt::Debug for ProjectorFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProjectorFamily").field("model", &self.model.name).field("order", &self.order).finish()
    }
}

impl ProjectorFamily {
    pub fn model(&self) -> &Arc<FibrationModel> {
        &self.model
    }

    /// Strictly descending lexicographic order, starting at `(n, m_n)`.
    pub fn order(&self) -> &[GenIndex] {
        &self.order
    }

    pub fn operator(&self, idx: GenIndex) -> &YOperator {
        &self.operators[&idx]
    }

    pub fn operators(&self) -> &BTreeMap<GenIndex, YOperator> {
        &self.operators
    }

    pub fn w_set(&self, idx: GenIndex) -> &[GenIndex] {
        &self.w_sets[&idx]
    }

    /// `id − Σ_{(k,l) ∈ W_{i,j}} ρ_{k,l}`.
    pub fn correction(&self, idx: GenIndex) -> YOperator {
        correction_from(&self.model, &self.operators, &self.w_sets[&idx])
    }
}

fn correction_from(
    model: &FibrationModel,
    built: &BTreeMap<GenIndex, YOperator>,
    w: &[GenIndex],
) -> YOperator {
    let mut c = Matrix::identity(model.len());
    for idx in w {
        c = &c - &built[idx];
    }
    c
}

/// `m_{T_{i,j}} ∘ π^∗ ∘ inner ∘ π_∗ ∘ m_{T_{n−i,j}}`, with `inner` acting on `CH^∗(X)`.
pub(crate) fn sandwich(model: &FibrationModel, g: usize, inner: Option<&Matrix>) -> YOperator {
    let push = model.push_matrix();
    let pull = model.pull_matrix();
    let down = &push * model.gen_mult(model.dual_generator(g));
    let middle = match inner {
        Some(m) => m * &down,
        None => down,
    };
    &(model.gen_mult(g) * &pull) * &middle
}

pub fn build_projector_family(model: &Arc<FibrationModel>) -> Result<ProjectorFamily> {
    require_valid(model)?;
    Ok(build_unchecked(model))
}

fn build_unchecked(model: &Arc<FibrationModel>) -> ProjectorFamily {
    let fiber = &model.fiber;
    let mut order: Vec<GenIndex> = (0..fiber.len()).map(|g| model.generator_index(g)).collect();
    order.sort_by(|a, b| b.cmp(a));
    let mut operators = BTreeMap::new();
    let mut w_sets = BTreeMap::new();
    for &idx in &order {
        let w = w_set(fiber, idx);
        let g = model.generator(idx).expect("generator from fiber cell");
        let op = &sandwich(model, g, None) * &correction_from(model, &operators, &w);
        operators.insert(idx, op);
        w_sets.insert(idx, w);
    }
    ProjectorFamily { model: model.clone(), order, operators, w_sets }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct FamilyReport {
    pub model: String,
    pub projectors: usize,
    pub degree_preserving: bool,
    pub idempotent: bool,
    pub orthogonal: bool,
    pub complete: bool,
    pub failures: Vec<String>,
}

impl FamilyReport {
    pub fn passed(&self) -> bool {
        self.degree_preserving && self.idempotent && self.orthogonal && self.complete
    }
}

/// Whether an operator maps each `CH^p` into `CH^p`.
pub fn is_degree_preserving(model: &FibrationModel, op: &YOperator) -> bool {
    (0..op.rows()).all(|r| (0..op.cols()).all(|c| op.get(r, c).is_zero() || model.codim_of(r) == model.codim_of(c)))
}

/// Exact check of degree preservation, idempotence, orthogonality and completeness.
pub fn verify_operator_system(model: &FibrationModel, ops: &[(String, YOperator)]) -> FamilyReport {
    let mut report = FamilyReport {
        model: model.name.clone(),
        projectors: ops.len(),
        degree_preserving: true,
        idempotent: true,
        orthogonal: true,
        complete: true,
        failures: Vec::new(),
    };
    for (name, op) in ops {
        if !is_degree_preserving(model, op) {
            report.degree_preserving = false;
            report.failures.push(format!("{name} is not degree-preserving"));
        }
    }
    for (i, (ni, a)) in ops.iter().enumerate() {
        for (j, (nj, b)) in ops.iter().enumerate() {
            let ab = a * b;
            if i == j {
                if ab != *a {
                    report.idempotent = false;
                    report.failures.push(format!("{ni} ∘ {ni} ≠ {ni}"));
                }
            } else if !ab.is_zero() {
                report.orthogonal = false;
                report.failures.push(format!("{ni} ∘ {nj} ≠ 0"));
            }
        }
    }
    let mut sum = Matrix::zeros(model.len(), model.len());
    for (_, op) in ops {
        sum = &sum + op;
    }
    if !sum.is_identity() {
        report.complete = false;
        report.failures.push("Σ ≠ id".into());
    }
    report
}

pub fn verify_family(family: &ProjectorFamily) -> FamilyReport {
    let ops: Vec<(String, YOperator)> = family
        .order
        .iter()
        .map(|&(i, j)| (format!("ρ_{{{i},{j}}}"), family.operators[&(i, j)].clone()))
        .collect();
    verify_operator_system(&family.model, &ops)
}

/// Base `T × X`, same fiber, coefficients `1_T × c`.
pub fn ambient_extend(model: &Arc<FibrationModel>, t: &Arc<ChowRing>) -> Result<Arc<FibrationModel>> {
    let base = kunneth_product(t, &model.base);
    let (m, nb) = (model.fiber.len(), model.base.len());
    let one_t = Cycle::unit(t);
    let mut entries = Vec::new();
    for g in 0..m {
        for h in 0..m {
            let prod = model.product_coords(g, h);
            let mut components = Vec::new();
            for k in 0..m {
                let coeffs = prod[k * nb..(k + 1) * nb].to_vec();
                if coeffs.iter().all(Zero::is_zero) {
                    continue;
                }
                let c = Cycle::from_coeffs(&model.base, CoeffMode::Rational, coeffs)?;
                components.push((k, external_product(&one_t, &c, &base)?));
            }
            entries.push(((g, h), components));
        }
    }
    FibrationModel::from_table(format!("{}×{}", t.name(), model.name), base, model.fiber.clone(), entries)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatteryEntry {
    pub test_ring: String,
    pub report: FamilyReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatteryReport {
    pub model: String,
    pub entries: Vec<BatteryEntry>,
}

impl BatteryReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.report.passed())
    }
}

/// Rebuilds and re-verifies the projector family on `T × Y` for each `T`.
pub fn manin_battery(model: &Arc<FibrationModel>, tests: &[Arc<ChowRing>]) -> Result<BatteryReport> {
    require_valid(model)?;
    let entries: Result<Vec<BatteryEntry>> = tests
        .par_iter()
        .map(|t| {
            let extended = ambient_extend(model, t)?;
            let family = build_projector_family(&extended)?;
            Ok(BatteryEntry { test_ring: t.name().to_string(), report: verify_family(&family) })
        })
        .collect();
    Ok(BatteryReport { model: model.name.clone(), entries: entries? })
}

/// Morphisms `h_{i,j}: (Y, p_{i,j}) → (Y', p'_{i,j})` and back.
#[derive(Debug, Clone)]
pub struct MotiveIsoPair {
    pub first: ProjectorFamily,
    pub second: ProjectorFamily,
    pub forward: BTreeMap<GenIndex, Matrix>,
    pub backward: BTreeMap<GenIndex, Matrix>,
}

/// `m'_{T'} ∘ π'^∗ ∘ π_∗ ∘ m_{T_{n−i,j}} ∘ (id − Σ_W p_{k,l})`.
fn transfer(from: &ProjectorFamily, to: &FibrationModel, idx: GenIndex) -> Matrix {
    let src = &from.model;
    let g_src = src.generator(idx).expect("generator");
    let g_dst = to.generator(idx).expect("generator");
    let down = &src.push_matrix() * src.gen_mult(src.dual_generator(g_src));
    let up = to.gen_mult(g_dst) * &to.pull_matrix();
    &(&up * &down) * &from.correction(idx)
}

pub fn motive_iso_pair(first: &Arc<FibrationModel>, second: &Arc<FibrationModel>) -> Result<MotiveIsoPair> {
    ensure_same(&first.base, &second.base, "motive isomorphism base")?;
    ensure_same(&first.fiber, &second.fiber, "motive isomorphism fiber")?;
    let f1 = build_projector_family(first)?;
    let f2 = build_projector_family(second)?;
    let mut forward = BTreeMap::new();
    let mut backward = BTreeMap::new();
    for &idx in f1.order() {
        forward.insert(idx, transfer(&f1, second, idx));
        backward.insert(idx, transfer(&f2, first, idx));
    }
    Ok(MotiveIsoPair { first: f1, second: f2, forward, backward })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsoReport {
    pub first: String,
    pub second: String,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl IsoReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl MotiveIsoPair {
    /// `h' ∘ h = id mod p`, `h ∘ h' = id mod p'`, and compatibility of both
    /// squares with the projectors, as exact operator identities.
    pub fn verify(&self) -> IsoReport {
        let mut failures = Vec::new();
        let mut checked = 0;
        for &idx in self.first.order() {
            let (h, hb) = (&self.forward[&idx], &self.backward[&idx]);
            let (p, pp) = (self.first.operator(idx), self.second.operator(idx));
            let mut check = |ok: bool, what: &str| {
                checked += 1;
                if !ok {
                    failures.push(format!("{what} at ({},{})", idx.0, idx.1));
                }
            };
            check(&(hb * h) * p == *p, "h'∘h ≠ id mod p");
            check(&(h * hb) * pp == *pp, "h∘h' ≠ id mod p'");
            check(pp * h == *h && h * p == *h, "p'∘h ≠ h∘p");
            check(p * hb == *hb && hb * pp == *hb, "p∘h' ≠ h'∘p'");
        }
        IsoReport {
            first: self.first.model.name.clone(),
            second: self.second.model.name.clone(),
            checked,
            failures,
        }
    }
}

/// `rank CH^p(Y)` measured as the rank of the intersection pairing
/// `CH^p(Y) × CH^{dim Y − p}(Y) → Z`, `(u, v) ↦ deg_X π_∗(u v)`.
pub fn pairing_rank(model: &Arc<FibrationModel>, p: usize) -> Result<usize> {
    let dim = model.dimension();
    if p > dim {
        return Ok(0);
    }
    let rows = model.coords_in_codim(p);
    let cols = model.coords_in_codim(dim - p);
    let basis = |c: usize| {
        let mut v = vec![BigRational::zero(); model.len()];
        v[c] = BigRational::one();
        YCycle::from_coords(model, v)
    };
    let mut gram = Matrix::zeros(rows.len(), cols.len());
    for (i, &r) in rows.iter().enumerate() {
        let u = basis(r)?;
        for (j, &c) in cols.iter().enumerate() {
            let uv = u.mul(&basis(c)?)?;
            gram.set(i, j, pushforward(model, &uv)?.degree());
        }
    }
    Ok(gram.rank())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{grassmannian, hirzebruch, projective_space};
    use crate::matrix::q;

    #[test]
    fn trivial_over_point_is_the_fiber() {
        let pt = projective_space(0);
        let p2 = projective_space(2);
        let m = trivial_fibration(&pt, &p2).unwrap();
        assert!(validate_fibration(&m).passed());
        let h = YCycle::generator(&m, 1);
        assert_eq!(h.mul(&h).unwrap(), YCycle::generator(&m, 2));
    }

    #[test]
    fn trivial_p1_p1_relation() {
        let p1 = projective_space(1);
        let m = trivial_fibration(&p1, &p1).unwrap();
        let t = YCycle::generator(&m, 1);
        assert!(t.mul(&t).unwrap().is_zero());
    }

    #[test]
    fn rank_of_p2_times_gr24() {
        let m = trivial_fibration(&projective_space(2), &grassmannian(2, 4).unwrap()).unwrap();
        // m_0 + m_1 + m_2 of the fiber, each against a rank-1 piece of P^2
        assert_eq!(m.ranks()[2], 4);
        assert_eq!(pairing_rank(&m, 2).unwrap(), 4);
    }

    #[test]
    fn broken_unit_is_located() {
        let p1 = projective_space(1);
        // T_{1,1} · T_{0,1} = 2 T_{1,1}
        let entries = vec![((1, 0), vec![(1, Cycle::unit(&p1).scale(&q(2)))])];
        let m = FibrationModel::from_table("broken", p1.clone(), p1.clone(), entries).unwrap();
        let report = validate_fibration(&m);
        assert!(!report.passed());
        assert!(report.violations.iter().any(|v| v.check == "duality" && v.location == "T[h]·T[1]"));
        assert!(build_projector_family(&m).is_err());
    }

    #[test]
    fn hirzebruch_pushforward_and_projection_formula() {
        let m = hirzebruch(2).unwrap();
        let x = m.base().clone();
        let t = YCycle::generator(&m, 1);
        assert_eq!(pushforward(&m, &t).unwrap(), Cycle::unit(&x));
        let h = Cycle::from_labels(&x, &[("h", 1)]).unwrap();
        let y = pullback(&m, &h).unwrap().mul(&t).unwrap();
        assert_eq!(pushforward(&m, &y).unwrap(), h);
        // T_{0,1}-only cycles push to zero
        assert!(pushforward(&m, &pullback(&m, &h).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn duality_triple_cases() {
        let m = hirzebruch(1).unwrap();
        let x = m.base().clone();
        let h = Cycle::from_labels(&x, &[("h", 1)]).unwrap();
        let (v, outside) = duality_triple(&m, &h, (0, 1), (1, 1)).unwrap();
        assert_eq!(v, h);
        assert!(!outside);
        let (v, _) = duality_triple(&m, &h, (0, 1), (0, 1)).unwrap();
        assert!(v.is_zero());
        let (_, outside) = duality_triple(&m, &h, (1, 1), (1, 1)).unwrap();
        assert!(outside);
        assert!(duality_triple(&m, &h, (2, 1), (0, 1)).is_err());
    }

    #[test]
    fn w_sets_follow_definition() {
        let g = grassmannian(2, 4).unwrap();
        assert_eq!(w_set(&g, (2, 1)), vec![(2, 2), (3, 1), (4, 1)]);
        assert_eq!(w_set(&g, (4, 1)), vec![]);
        assert_eq!(w_set(&g, (0, 1)).len(), 5);
    }

    #[test]
    fn induction_start_has_empty_w_set() {
        let m = hirzebruch(1).unwrap();
        let fam = build_projector_family(&m).unwrap();
        assert_eq!(fam.order()[0], (1, 1));
        assert!(fam.w_set((1, 1)).is_empty());
        assert_eq!(*fam.operator((1, 1)), sandwich(&m, 1, None));
    }

    #[test]
    fn ambient_extension_by_point_keeps_structure() {
        let m = hirzebruch(2).unwrap();
        let e = ambient_extend(&m, &projective_space(0)).unwrap();
        assert!(validate_fibration(&e).passed());
        for g in 0..2 {
            for h in 0..2 {
                assert_eq!(e.product_coords(g, h), m.product_coords(g, h));
            }
        }
    }

    #[test]
    fn iso_pair_with_itself_matches_projectors() {
        let m = trivial_fibration(&projective_space(1), &projective_space(2)).unwrap();
        let pair = motive_iso_pair(&m, &m).unwrap();
        for &idx in pair.first.order() {
            assert_eq!(pair.forward[&idx], *pair.first.operator(idx));
        }
        assert!(pair.verify().passed());
    }

    #[test]
    fn mismatched_iso_pair_rejected() {
        let a = hirzebruch(0).unwrap();
        let b = trivial_fibration(&projective_space(2), &projective_space(1)).unwrap();
        assert!(motive_iso_pair(&a, &b).is_err());
    }
}
