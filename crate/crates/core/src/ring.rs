//! Graded Chow rings with cellular bases.
//!
//! A [`ChowRing`] is a free graded module with one basis cell per generator
//! of each `CH^p`, an exact integer multiplication table, and a declared
//! *dual cell* for every cell. The ring is δ-normalized when the intersection
//! degree of a cell against a complementary cell is `1` for its dual and `0`
//! otherwise. Rings read from data files or built by the catalog use the
//! same-index convention (`τ_{p,i}` is dual to `τ_{n-p,i}`); Künneth
//! products carry the induced pair duality, which differs from same-index
//! only in the middle degree.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BasisCell {
    pub codim: usize,
    /// 1-based position among the cells of the same codimension.
    pub index: usize,
    pub label: String,
    /// Dimension of the affine cell, if known. Metadata only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cell_dim: Option<usize>,
}

impl BasisCell {
    pub fn new(codim: usize, index: usize, label: impl Into<String>) -> Self {
        BasisCell { codim, index, label: label.into(), cell_dim: None }
    }

    pub fn with_cell_dim(mut self, d: usize) -> Self {
        self.cell_dim = Some(d);
        self
    }
}

/// Sparse structure constants: a list of `(cell, coefficient)` pairs.
pub type Terms = Vec<(usize, BigInt)>;

#[derive(Debug, Clone)]
pub struct Factors {
    pub left: Arc<ChowRing>,
    pub right: Arc<ChowRing>,
    /// `pairs[c] = (a, b)` for each product cell `c`.
    pub pairs: Vec<(usize, usize)>,
    lookup: Vec<usize>,
}

impl Factors {
    /// Product cell for the pair `(a, b)`.
    pub fn cell(&self, a: usize, b: usize) -> usize {
        self.lookup[a * self.right.len() + b]
    }
}

#[derive(Clone)]
pub struct ChowRing {
    name: String,
    dimension: usize,
    cells: Vec<BasisCell>,
    offsets: Vec<usize>,
    table: Vec<Terms>,
    dual: Vec<usize>,
    gram: Matrix,
    factors: Option<Factors>,
}

impl fmt::Debug for ChowRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ChowRing")
            .field("name", &self.name)
            .field("dimension", &self.dimension)
            .field("ranks", &self.ranks())
            .finish()
    }
}

impl PartialEq for ChowRing {
    fn eq(&self, other: &Self) -> bool {
        self.dimension == other.dimension
            && self.cells == other.cells
            && self.table == other.table
            && self.dual == other.dual
    }
}

impl Eq for ChowRing {}

/// Input description of a ring, with products keyed by cell position in `cells`.
#[derive(Debug, Clone, Default)]
pub struct RingData {
    pub name: String,
    pub dimension: usize,
    pub cells: Vec<BasisCell>,
    pub products: BTreeMap<(usize, usize), Terms>,
    /// Explicit dual involution on positions in `cells`; same-index if absent.
    pub dual: Option<Vec<usize>>,
}

impl ChowRing {
    /// Validates ring data and builds the ring.
    ///
    /// Checks ranks (`m_0 = m_n = 1`, `m_p = m_{n-p}`), index ranges, unique
    /// labels, grading, the unit law, commutativity, associativity and the
    /// dual involution. The pairing itself is *not* required to be perfect
    /// here; see [`verify_pairing`].
    pub fn from_data(data: RingData) -> Result<Arc<ChowRing>> {
        let RingData { name, dimension: n, cells, products, dual } = data;
        let bad = |msg: String| Error::InvalidRing(format!("{name}: {msg}"));

        let mut labels = HashSet::new();
        for c in &cells {
            if c.codim > n {
                return Err(bad(format!("cell {} has codim {} > dimension {n}", c.label, c.codim)));
            }
            if !labels.insert(c.label.clone()) {
                return Err(bad(format!("duplicate label {}", c.label)));
            }
        }
        // sort positions by (codim, index)
        let mut order: Vec<usize> = (0..cells.len()).collect();
        order.sort_by_key(|&i| (cells[i].codim, cells[i].index));
        let mut position = vec![0; cells.len()];
        for (new, &old) in order.iter().enumerate() {
            position[old] = new;
        }
        let sorted: Vec<BasisCell> = order.iter().map(|&i| cells[i].clone()).collect();

        let ranks = ranks_of(&sorted, n);
        for (p, &m) in ranks.iter().enumerate() {
            let idx: Vec<usize> = sorted.iter().filter(|c| c.codim == p).map(|c| c.index).collect();
            if idx != (1..=m).collect::<Vec<_>>() {
                return Err(bad(format!("indices in codim {p} are {idx:?}, expected 1..={m}")));
            }
        }
        if ranks[0] != 1 || ranks[n] != 1 {
            return Err(bad(format!("ranks {ranks:?} must start and end with 1")));
        }
        for p in 0..=n {
            if ranks[p] != ranks[n - p] {
                return Err(bad(format!("rank of CH^{p} differs from rank of CH^{}", n - p)));
            }
        }
        let total = sorted.len();
        let offsets = offsets_of(&ranks);

        let mut table: Vec<Option<Terms>> = vec![None; total * total];
        for (&(i, j), terms) in &products {
            if i >= total || j >= total || terms.iter().any(|(c, _)| *c >= total) {
                return Err(bad("product refers to an unknown cell".into()));
            }
            let (i, j) = (position[i], position[j]);
            let mut acc: BTreeMap<usize, BigInt> = BTreeMap::new();
            for (c, v) in terms {
                *acc.entry(position[*c]).or_insert_with(BigInt::zero) += v;
            }
            let terms: Terms = acc.into_iter().filter(|(_, v)| !v.is_zero()).collect();
            for (c, _) in &terms {
                if sorted[*c].codim != sorted[i].codim + sorted[j].codim {
                    return Err(bad(format!(
                        "{} * {} has a term in codim {}, expected {}",
                        sorted[i].label,
                        sorted[j].label,
                        sorted[*c].codim,
                        sorted[i].codim + sorted[j].codim
                    )));
                }
            }
            for (a, b) in [(i, j), (j, i)] {
                match &table[a * total + b] {
                    Some(existing) if *existing != terms => {
                        return Err(bad(format!(
                            "products {} * {} given inconsistently (not commutative)",
                            sorted[a].label, sorted[b].label
                        )));
                    }
                    _ => table[a * total + b] = Some(terms.clone()),
                }
            }
        }
        // unit law: the codim-0 cell is cell 0
        for k in 0..total {
            for (a, b) in [(0, k), (k, 0)] {
                let expected = vec![(k, BigInt::one())];
                match &table[a * total + b] {
                    Some(t) if *t != expected => {
                        return Err(bad(format!("unit law fails for {}", sorted[k].label)));
                    }
                    _ => table[a * total + b] = Some(expected),
                }
            }
        }
        let table: Vec<Terms> = table.into_iter().map(Option::unwrap_or_default).collect();

        let dual = match dual {
            Some(d) => {
                if d.len() != total {
                    return Err(bad("dual map has wrong length".into()));
                }
                let mut out = vec![0; total];
                for (old, &target) in d.iter().enumerate() {
                    if target >= total {
                        return Err(bad("dual map refers to an unknown cell".into()));
                    }
                    out[position[old]] = position[target];
                }
                out
            }
            None => (0..total)
                .map(|i| {
                    let c = &sorted[i];
                    offsets[n - c.codim] + c.index - 1
                })
                .collect(),
        };
        for i in 0..total {
            let d = dual[i];
            if dual[d] != i || sorted[d].codim != n - sorted[i].codim {
                return Err(bad(format!("dual map is not a codim-reversing involution at {}", sorted[i].label)));
            }
        }

        let ring = ChowRing::assemble(name, n, sorted, offsets, table, dual, None);
        ring.check_associative()?;
        Ok(Arc::new(ring))
    }

    fn assemble(
        name: String,
        dimension: usize,
        cells: Vec<BasisCell>,
        offsets: Vec<usize>,
        table: Vec<Terms>,
        dual: Vec<usize>,
        factors: Option<Factors>,
    ) -> ChowRing {
        let total = cells.len();
        let point = total - 1;
        let gram = Matrix::from_fn(total, total, |i, j| {
            let v = table[i * total + j]
                .iter()
                .find(|(c, _)| *c == point)
                .map(|(_, v)| v.clone())
                .unwrap_or_default();
            BigRational::from_integer(v)
        });
        ChowRing { name, dimension, cells, offsets, table, dual, gram, factors }
    }

    fn check_associative(&self) -> Result<()> {
        let total = self.len();
        for a in 0..total {
            for b in a..total {
                let ab = &self.table[a * total + b];
                for c in 0..total {
                    if self.cells[a].codim + self.cells[b].codim + self.cells[c].codim > self.dimension {
                        continue;
                    }
                    let left = self.mul_terms(ab, &[(c, BigInt::one())]);
                    let bc = &self.table[b * total + c];
                    let right = self.mul_terms(&[(a, BigInt::one())], bc);
                    if left != right {
                        return Err(Error::InvalidRing(format!(
                            "{}: ({} * {}) * {} != {} * ({} * {})",
                            self.name,
                            self.cells[a].label,
                            self.cells[b].label,
                            self.cells[c].label,
                            self.cells[a].label,
                            self.cells[b].label,
                            self.cells[c].label
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn mul_terms(&self, x: &[(usize, BigInt)], y: &[(usize, BigInt)]) -> Terms {
        let total = self.len();
        let mut acc: BTreeMap<usize, BigInt> = BTreeMap::new();
        for (i, u) in x {
            for (j, v) in y {
                for (k, w) in &self.table[i * total + j] {
                    *acc.entry(*k).or_insert_with(BigInt::zero) += u * v * w;
                }
            }
        }
        acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Number of basis cells.
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cells(&self) -> &[BasisCell] {
        &self.cells
    }

    pub fn cell(&self, i: usize) -> &BasisCell {
        &self.cells[i]
    }

    pub fn codim_of(&self, i: usize) -> usize {
        self.cells[i].codim
    }

    /// `m_0, ..., m_n`.
    pub fn ranks(&self) -> Vec<usize> {
        ranks_of(&self.cells, self.dimension)
    }

    pub fn rank(&self, codim: usize) -> usize {
        if codim > self.dimension {
            0
        } else {
            self.offsets[codim + 1] - self.offsets[codim]
        }
    }

    /// Cell positions of `CH^codim`.
    pub fn codim_range(&self, codim: usize) -> std::ops::Range<usize> {
        if codim > self.dimension {
            return self.len()..self.len();
        }
        self.offsets[codim]..self.offsets[codim + 1]
    }

    /// Position of `τ_{codim,index}` (1-based index).
    pub fn position(&self, codim: usize, index: usize) -> Option<usize> {
        (index >= 1 && index <= self.rank(codim)).then(|| self.offsets[codim] + index - 1)
    }

    pub fn find_label(&self, label: &str) -> Option<usize> {
        self.cells.iter().position(|c| c.label == label)
    }

    pub fn unit_cell(&self) -> usize {
        0
    }

    pub fn point_cell(&self) -> usize {
        self.len() - 1
    }

    pub fn dual(&self, i: usize) -> usize {
        self.dual[i]
    }

    pub fn dual_map(&self) -> &[usize] {
        &self.dual
    }

    /// Structure constants of `τ_i · τ_j`.
    pub fn product_terms(&self, i: usize, j: usize) -> &Terms {
        &self.table[i * self.len() + j]
    }

    /// Intersection degrees `deg(τ_i · τ_j)` for all cell pairs.
    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn factors(&self) -> Option<&Factors> {
        self.factors.as_ref()
    }

    /// Pointer or structural identity.
    pub fn same_as(self: &Arc<Self>, other: &Arc<ChowRing>) -> bool {
        Arc::ptr_eq(self, other) || **self == **other
    }
}

fn ranks_of(cells: &[BasisCell], n: usize) -> Vec<usize> {
    let mut ranks = vec![0; n + 1];
    for c in cells {
        ranks[c.codim] += 1;
    }
    ranks
}

fn offsets_of(ranks: &[usize]) -> Vec<usize> {
    let mut offsets = vec![0];
    for r in ranks {
        offsets.push(offsets.last().unwrap() + r);
    }
    offsets
}

pub(crate) fn ensure_same(a: &Arc<ChowRing>, b: &Arc<ChowRing>, what: &str) -> Result<()> {
    if a.same_as(b) {
        Ok(())
    } else {
        Err(Error::RingMismatch(format!("{what}: {} vs {}", a.name(), b.name())))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoeffMode {
    Integer,
    Rational,
}

impl CoeffMode {
    pub fn join(self, other: CoeffMode) -> CoeffMode {
        if self == CoeffMode::Integer && other == CoeffMode::Integer {
            CoeffMode::Integer
        } else {
            CoeffMode::Rational
        }
    }
}

/// An exact linear combination of basis cells.
///
/// Coefficients are stored as rationals in both modes; integer-mode cycles
/// are guaranteed integral.
#[derive(Clone)]
pub struct Cycle {
    ring: Arc<ChowRing>,
    mode: CoeffMode,
    coeffs: Vec<BigRational>,
}

impl fmt::Debug for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cycle[{}]({})", self.ring.name(), self)
    }
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, v)| {
                let label = &self.ring.cell(i).label;
                if v.is_one() { label.clone() } else { format!("{v}*{label}") }
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl PartialEq for Cycle {
    fn eq(&self, other: &Self) -> bool {
        self.ring.same_as(&other.ring) && self.coeffs == other.coeffs
    }
}

impl Cycle {
    pub fn zero(ring: &Arc<ChowRing>, mode: CoeffMode) -> Cycle {
        Cycle { ring: ring.clone(), mode, coeffs: vec![BigRational::zero(); ring.len()] }
    }

    pub fn basis(ring: &Arc<ChowRing>, cell: usize) -> Cycle {
        let mut c = Cycle::zero(ring, CoeffMode::Integer);
        c.coeffs[cell] = BigRational::one();
        c
    }

    pub fn unit(ring: &Arc<ChowRing>) -> Cycle {
        Cycle::basis(ring, ring.unit_cell())
    }

    pub fn point(ring: &Arc<ChowRing>) -> Cycle {
        Cycle::basis(ring, ring.point_cell())
    }

    pub fn from_coeffs(ring: &Arc<ChowRing>, mode: CoeffMode, coeffs: Vec<BigRational>) -> Result<Cycle> {
        if coeffs.len() != ring.len() {
            return Err(Error::RingMismatch(format!(
                "{} coefficients for ring {} with {} cells",
                coeffs.len(),
                ring.name(),
                ring.len()
            )));
        }
        if mode == CoeffMode::Integer {
            if let Some(v) = coeffs.iter().find(|v| !v.is_integer()) {
                return Err(Error::NotIntegral(v.to_string()));
            }
        }
        Ok(Cycle { ring: ring.clone(), mode, coeffs })
    }

    pub fn from_integers(ring: &Arc<ChowRing>, coeffs: &[i64]) -> Result<Cycle> {
        Cycle::from_coeffs(ring, CoeffMode::Integer, coeffs.iter().map(|&v| crate::matrix::q(v)).collect())
    }

    /// Builds a cycle from `(label, coefficient)` terms.
    pub fn from_labels(ring: &Arc<ChowRing>, terms: &[(&str, i64)]) -> Result<Cycle> {
        let mut c = Cycle::zero(ring, CoeffMode::Integer);
        for (label, v) in terms {
            let i = ring.find_label(label).ok_or_else(|| Error::UnknownName(label.to_string()))?;
            c.coeffs[i] += crate::matrix::q(*v);
        }
        Ok(c)
    }

    pub fn ring(&self) -> &Arc<ChowRing> {
        &self.ring
    }

    pub fn mode(&self) -> CoeffMode {
        self.mode
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, cell: usize) -> &BigRational {
        &self.coeffs[cell]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Codimension if the cycle is nonzero and homogeneous.
    pub fn homogeneous_codim(&self) -> Option<usize> {
        let mut codims = self.support().map(|i| self.ring.codim_of(i));
        let first = codims.next()?;
        codims.all(|c| c == first).then_some(first)
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(i, _)| i)
    }

    /// The `CH^codim` part.
    pub fn component(&self, codim: usize) -> Cycle {
        let range = self.ring.codim_range(codim);
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, v)| if range.contains(&i) { v.clone() } else { BigRational::zero() })
            .collect();
        Cycle { ring: self.ring.clone(), mode: self.mode, coeffs }
    }

    pub fn to_rational(&self) -> Cycle {
        Cycle { mode: CoeffMode::Rational, ..self.clone() }
    }

    pub fn to_integer(&self) -> Result<Cycle> {
        Cycle::from_coeffs(&self.ring, CoeffMode::Integer, self.coeffs.clone())
    }

    pub fn add(&self, other: &Cycle) -> Result<Cycle> {
        ensure_same(&self.ring, &other.ring, "cycle sum")?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(Cycle { ring: self.ring.clone(), mode: self.mode.join(other.mode), coeffs })
    }

    pub fn sub(&self, other: &Cycle) -> Result<Cycle> {
        ensure_same(&self.ring, &other.ring, "cycle difference")?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(Cycle { ring: self.ring.clone(), mode: self.mode.join(other.mode), coeffs })
    }

    /// Scalar multiple; a non-integral scalar switches to rational mode.
    pub fn scale(&self, s: &BigRational) -> Cycle {
        let mode = if s.is_integer() { self.mode } else { CoeffMode::Rational };
        Cycle { ring: self.ring.clone(), mode, coeffs: self.coeffs.iter().map(|v| v * s).collect() }
    }

    pub fn mul(&self, other: &Cycle) -> Result<Cycle> {
        multiply(&self.ring, self, other)
    }

    pub fn degree(&self) -> BigRational {
        self.coeffs[self.ring.point_cell()].clone()
    }
}

/// Bilinear extension of the multiplication table.
pub fn multiply(ring: &Arc<ChowRing>, a: &Cycle, b: &Cycle) -> Result<Cycle> {
    ensure_same(ring, &a.ring, "multiply")?;
    ensure_same(ring, &b.ring, "multiply")?;
    let mut out = Cycle::zero(ring, a.mode.join(b.mode));
    for i in a.support() {
        for j in b.support() {
            let ab = &a.coeffs[i] * &b.coeffs[j];
            for (k, w) in ring.product_terms(i, j) {
                out.coeffs[*k] += &ab * BigRational::from_integer(w.clone());
            }
        }
    }
    Ok(out)
}

/// Coefficient of the point class.
pub fn degree(ring: &Arc<ChowRing>, a: &Cycle) -> Result<BigRational> {
    ensure_same(ring, &a.ring, "degree")?;
    Ok(a.degree())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairingBlock {
    pub codim: usize,
    /// Entry `[i-1][j-1]` is `deg(τ_{p,i} · τ_{n-p,j})`.
    pub matrix: Vec<Vec<String>>,
    pub is_identity: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairingViolation {
    pub codim: usize,
    pub row: usize,
    pub col: usize,
    pub value: String,
    pub expected: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairingReport {
    pub ring: String,
    pub blocks: Vec<PairingBlock>,
    pub violations: Vec<PairingViolation>,
}

impl PairingReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// True when every block is literally an identity matrix.
    pub fn literal_identity(&self) -> bool {
        self.blocks.iter().all(|b| b.is_identity)
    }
}

/// Computes every pairing block `P_p` and compares it with the declared dual.
pub fn verify_pairing(ring: &ChowRing) -> PairingReport {
    let n = ring.dimension();
    let mut blocks = Vec::new();
    let mut violations = Vec::new();
    for p in 0..=n {
        let rows = ring.codim_range(p);
        let cols = ring.codim_range(n - p);
        let block = ring.gram().block(rows.clone(), cols.clone());
        for (i, r) in rows.clone().enumerate() {
            for (j, c) in cols.clone().enumerate() {
                let expected = i64::from(ring.dual(r) == c);
                let value = block.get(i, j);
                if *value != crate::matrix::q(expected) {
                    violations.push(PairingViolation {
                        codim: p,
                        row: i + 1,
                        col: j + 1,
                        value: value.to_string(),
                        expected,
                    });
                }
            }
        }
        blocks.push(PairingBlock {
            codim: p,
            matrix: (0..block.rows()).map(|i| block.row(i).iter().map(|v| v.to_string()).collect()).collect(),
            is_identity: block.is_identity(),
        });
    }
    PairingReport { ring: ring.name().to_string(), blocks, violations }
}

/// Errors unless the ring passes [`verify_pairing`].
pub fn require_pairing(ring: &ChowRing) -> Result<()> {
    let report = verify_pairing(ring);
    if report.passed() {
        Ok(())
    } else {
        Err(Error::PairingFailure { ring: ring.name().to_string(), violations: report.violations.len() })
    }
}

/// The Künneth ring `A × B`.
///
/// Product cells are pairs `(a, b)` with codim the sum. For `p < N - p` the
/// codim-`p` pairs are ordered lexicographically and the codim-`(N-p)` pairs are
/// ordered as their duals, so same-index duality holds away from the middle
/// degree.
pub fn kunneth_product(a: &Arc<ChowRing>, b: &Arc<ChowRing>) -> Arc<ChowRing> {
    let n = a.dimension() + b.dimension();
    let mut by_codim: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n + 1];
    for x in 0..a.len() {
        for y in 0..b.len() {
            by_codim[a.codim_of(x) + b.codim_of(y)].push((x, y));
        }
    }
    for p in 0..=n {
        if p > n - p {
            by_codim[p] = by_codim[n - p].iter().map(|&(x, y)| (a.dual(x), b.dual(y))).collect();
        }
    }
    let pairs: Vec<(usize, usize)> = by_codim.iter().flatten().copied().collect();
    let mut lookup = vec![0; a.len() * b.len()];
    for (c, &(x, y)) in pairs.iter().enumerate() {
        lookup[x * b.len() + y] = c;
    }
    let mut cells = Vec::with_capacity(pairs.len());
    for (p, list) in by_codim.iter().enumerate() {
        for (k, &(x, y)) in list.iter().enumerate() {
            let mut cell = BasisCell::new(p, k + 1, format!("{}⊗{}", a.cell(x).label, b.cell(y).label));
            if let (Some(dx), Some(dy)) = (a.cell(x).cell_dim, b.cell(y).cell_dim) {
                cell.cell_dim = Some(dx + dy);
            }
            cells.push(cell);
        }
    }
    let total = pairs.len();
    let mut table = vec![Terms::new(); total * total];
    for (c1, &(x1, y1)) in pairs.iter().enumerate() {
        for (c2, &(x2, y2)) in pairs.iter().enumerate() {
            let mut terms = Terms::new();
            for (xa, u) in a.product_terms(x1, x2) {
                for (yb, v) in b.product_terms(y1, y2) {
                    terms.push((lookup[xa * b.len() + yb], u * v));
                }
            }
            terms.sort_by_key(|(c, _)| *c);
            table[c1 * total + c2] = terms;
        }
    }
    let dual = pairs.iter().map(|&(x, y)| lookup[a.dual(x) * b.len() + b.dual(y)]).collect();
    let ranks = ranks_of(&cells, n);
    let offsets = offsets_of(&ranks);
    let factors = Factors { left: a.clone(), right: b.clone(), pairs, lookup };
    Arc::new(ChowRing::assemble(format!("{}×{}", a.name(), b.name()), n, cells, offsets, table, dual, Some(factors)))
}

/// `a × b` in a Künneth product ring built from the rings of `a` and `b`.
pub fn external_product(a: &Cycle, b: &Cycle, product: &Arc<ChowRing>) -> Result<Cycle> {
    let factors = product
        .factors()
        .ok_or_else(|| Error::RingMismatch(format!("{} is not a registered product ring", product.name())))?;
    ensure_same(&factors.left, &a.ring, "external product (left factor)")?;
    ensure_same(&factors.right, &b.ring, "external product (right factor)")?;
    let mut out = Cycle::zero(product, a.mode.join(b.mode));
    for x in a.support() {
        for y in b.support() {
            out.coeffs[factors.cell(x, y)] += &a.coeffs[x] * &b.coeffs[y];
        }
    }
    Ok(out)
}

/// Splits a product-ring cycle into Künneth coordinates `(a, b) -> coefficient`.
pub fn kunneth_coordinates(c: &Cycle) -> Result<HashMap<(usize, usize), BigRational>> {
    let factors = c
        .ring
        .factors()
        .ok_or_else(|| Error::RingMismatch(format!("{} is not a product ring", c.ring.name())))?;
    Ok(c.support().map(|i| (factors.pairs[i], c.coeffs[i].clone())).collect())
}
