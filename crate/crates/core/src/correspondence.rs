//! Correspondences between cellular varieties.
//!
//! A correspondence `A → B` is a cycle on `A × B`. It is stored in Künneth
//! coordinates: `coeffs[a][b]` is the coefficient of `τ_a × τ_b`. A
//! correspondence of degree `r` is homogeneous of codim `dim A + r` and sends
//! `CH^p(A)` to `CH^{p+r}(B)`.
//!
//! Conventions fixed here and asserted in tests:
//! * `compose(g, f)` is "g after f", i.e. `π_13∗(π_12^∗ f · π_23^∗ g)`;
//! * `act(f, a) = p_B∗(p_A^∗ a · f)`;
//! * for a morphism `f: A → B`, `c(f)` is the correspondence `B → A` acting as
//!   `f^∗`, and `c(f)^t` is `A → B` acting as `f_∗`.

use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::ring::{ensure_same, require_pairing, ChowRing, CoeffMode, Cycle};

#[derive(Clone)]
pub struct Correspondence {
    source: Arc<ChowRing>,
    target: Arc<ChowRing>,
    degree: i64,
    coeffs: Matrix,
}

impl fmt::Debug for Correspondence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for a in 0..self.coeffs.rows() {
            for b in 0..self.coeffs.cols() {
                let v = self.coeffs.get(a, b);
                if !v.is_zero() {
                    terms.push(format!("{v}*{}×{}", self.source.cell(a).label, self.target.cell(b).label));
                }
            }
        }
        write!(
            f,
            "Correspondence[{} -> {}, deg {}]({})",
            self.source.name(),
            self.target.name(),
            self.degree,
            if terms.is_empty() { "0".to_string() } else { terms.join(" + ") }
        )
    }
}

impl PartialEq for Correspondence {
    fn eq(&self, other: &Self) -> bool {
        self.source.same_as(&other.source)
            && self.target.same_as(&other.target)
            && (self.degree == other.degree || (self.is_zero() && other.is_zero()))
            && self.coeffs == other.coeffs
    }
}

fn codim_i64(ring: &ChowRing, cell: usize) -> i64 {
    ring.codim_of(cell) as i64
}

impl Correspondence {
    /// Validates shape and homogeneity.
    pub fn new(source: Arc<ChowRing>, target: Arc<ChowRing>, degree: i64, coeffs: Matrix) -> Result<Self> {
        if coeffs.rows() != source.len() || coeffs.cols() != target.len() {
            return Err(Error::RingMismatch(format!(
                "coefficient matrix {}x{} for {} -> {}",
                coeffs.rows(),
                coeffs.cols(),
                source.name(),
                target.name()
            )));
        }
        let codim = source.dimension() as i64 + degree;
        for a in 0..coeffs.rows() {
            for b in 0..coeffs.cols() {
                if !coeffs.get(a, b).is_zero() && codim_i64(&source, a) + codim_i64(&target, b) != codim {
                    return Err(Error::NotHomogeneous(format!(
                        "term {}×{} is not in codim {codim}",
                        source.cell(a).label,
                        target.cell(b).label
                    )));
                }
            }
        }
        Ok(Correspondence { source, target, degree, coeffs })
    }

    pub fn zero(source: &Arc<ChowRing>, target: &Arc<ChowRing>, degree: i64) -> Self {
        Correspondence {
            source: source.clone(),
            target: target.clone(),
            degree,
            coeffs: Matrix::zeros(source.len(), target.len()),
        }
    }

    /// Reads a homogeneous cycle on a registered product ring `A × B`.
    pub fn from_cycle(cycle: &Cycle) -> Result<Self> {
        let ring = cycle.ring();
        let factors = ring
            .factors()
            .ok_or_else(|| Error::RingMismatch(format!("{} is not a product ring", ring.name())))?;
        let codim = cycle
            .homogeneous_codim()
            .ok_or_else(|| Error::NotHomogeneous("a correspondence needs a nonzero homogeneous cycle".into()))?;
        let mut coeffs = Matrix::zeros(factors.left.len(), factors.right.len());
        for c in cycle.support() {
            let (a, b) = factors.pairs[c];
            coeffs.set(a, b, cycle.coeff(c).clone());
        }
        let degree = codim as i64 - factors.left.dimension() as i64;
        Correspondence::new(factors.left.clone(), factors.right.clone(), degree, coeffs)
    }

    /// The underlying cycle on the product ring `product = source × target`.
    pub fn to_cycle(&self, product: &Arc<ChowRing>) -> Result<Cycle> {
        let factors = product
            .factors()
            .ok_or_else(|| Error::RingMismatch(format!("{} is not a product ring", product.name())))?;
        ensure_same(&factors.left, &self.source, "correspondence source")?;
        ensure_same(&factors.right, &self.target, "correspondence target")?;
        let mut coeffs = vec![BigRational::zero(); product.len()];
        for a in 0..self.source.len() {
            for b in 0..self.target.len() {
                coeffs[factors.cell(a, b)] = self.coeffs.get(a, b).clone();
            }
        }
        Cycle::from_coeffs(product, self.mode(), coeffs)
    }

    pub fn source(&self) -> &Arc<ChowRing> {
        &self.source
    }

    pub fn target(&self) -> &Arc<ChowRing> {
        &self.target
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn coeffs(&self) -> &Matrix {
        &self.coeffs
    }

    pub fn mode(&self) -> CoeffMode {
        let integral = (0..self.coeffs.rows())
            .all(|a| self.coeffs.row(a).iter().all(|v| v.is_integer()));
        if integral { CoeffMode::Integer } else { CoeffMode::Rational }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_zero()
    }

    fn same_shape(&self, other: &Correspondence, what: &str) -> Result<()> {
        ensure_same(&self.source, &other.source, what)?;
        ensure_same(&self.target, &other.target, what)?;
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(Error::NotHomogeneous(format!(
                "{what}: degrees {} and {} differ",
                self.degree, other.degree
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Correspondence) -> Result<Correspondence> {
        self.same_shape(other, "correspondence sum")?;
        let degree = if self.is_zero() { other.degree } else { self.degree };
        Ok(Correspondence { coeffs: &self.coeffs + &other.coeffs, degree, ..self.clone() })
    }

    pub fn sub(&self, other: &Correspondence) -> Result<Correspondence> {
        self.same_shape(other, "correspondence difference")?;
        let degree = if self.is_zero() { other.degree } else { self.degree };
        Ok(Correspondence { coeffs: &self.coeffs - &other.coeffs, degree, ..self.clone() })
    }

    pub fn scale(&self, s: &BigRational) -> Correspondence {
        Correspondence { coeffs: self.coeffs.scale(s), ..self.clone() }
    }

    /// Matrix of `act(self, ·)`: rows are target cells, columns source cells.
    pub fn action_matrix(&self) -> Matrix {
        // act(τ_i) = Σ_{a,b} f_ab deg(τ_i τ_a) τ_b
        &self.coeffs.transpose() * self.source.gram()
    }

    /// The restriction of the action to `CH^p(source) → CH^{p+r}(target)`.
    pub fn action_block(&self, codim: usize) -> Matrix {
        let cols = self.source.codim_range(codim);
        let target_codim = codim as i64 + self.degree;
        let rows = if target_codim < 0 {
            0..0
        } else {
            self.target.codim_range(target_codim as usize)
        };
        self.action_matrix().block(rows, cols)
    }
}

/// `g ∘ f` via the triple product: the middle factor is integrated out,
/// `(g ∘ f)_{ac} = Σ_{b,b'} f_{ab} · deg_B(τ_b τ_{b'}) · g_{b'c}`.
pub fn compose(g: &Correspondence, f: &Correspondence) -> Result<Correspondence> {
    ensure_same(&f.target, &g.source, "compose")?;
    let middle = &f.target;
    let (na, nb, nc) = (f.source.len(), middle.len(), g.target.len());
    let mut out = Matrix::zeros(na, nc);
    for a in 0..na {
        for b in 0..nb {
            let fab = f.coeffs.get(a, b);
            if fab.is_zero() {
                continue;
            }
            for b2 in 0..nb {
                let d = middle.gram().get(b, b2);
                if d.is_zero() {
                    continue;
                }
                let w = fab * d;
                for c in 0..nc {
                    let gbc = g.coeffs.get(b2, c);
                    if !gbc.is_zero() {
                        out.add_at(a, c, &(&w * gbc));
                    }
                }
            }
        }
    }
    Ok(Correspondence { source: f.source.clone(), target: g.target.clone(), degree: f.degree + g.degree, coeffs: out })
}

/// `p_B∗(p_A^∗(a) · f)`.
pub fn act(f: &Correspondence, a: &Cycle) -> Result<Cycle> {
    ensure_same(&f.source, a.ring(), "act")?;
    let out = f.action_matrix().apply(a.coeffs());
    Cycle::from_coeffs(&f.target, a.mode().join(f.mode()), out)
}

/// Swaps the two factors; the degree becomes `r + dim A − dim B`.
pub fn transpose(f: &Correspondence) -> Correspondence {
    Correspondence {
        source: f.target.clone(),
        target: f.source.clone(),
        degree: f.degree + f.source.dimension() as i64 - f.target.dimension() as i64,
        coeffs: f.coeffs.transpose(),
    }
}

/// `Δ_A = Σ_c τ_{dual(c)} × τ_c`, checked to act as the identity.
pub fn diagonal(ring: &Arc<ChowRing>) -> Result<Correspondence> {
    require_pairing(ring)?;
    let mut coeffs = Matrix::zeros(ring.len(), ring.len());
    for c in 0..ring.len() {
        coeffs.set(ring.dual(c), c, crate::matrix::q(1));
    }
    let delta = Correspondence::new(ring.clone(), ring.clone(), 0, coeffs)?;
    if !delta.action_matrix().is_identity() {
        return Err(Error::PairingFailure { ring: ring.name().to_string(), violations: 1 });
    }
    Ok(delta)
}

/// `c_α`, multiplication by a homogeneous class: `Σ_c τ_{dual(c)} × (τ_c · α)`.
pub fn multiplication(alpha: &Cycle) -> Result<Correspondence> {
    let ring = alpha.ring();
    require_pairing(ring)?;
    let degree = match alpha.homogeneous_codim() {
        Some(c) => c as i64,
        None if alpha.is_zero() => 0,
        None => return Err(Error::NotHomogeneous(format!("c_α needs homogeneous α, got {alpha}"))),
    };
    let mut coeffs = Matrix::zeros(ring.len(), ring.len());
    for c in 0..ring.len() {
        let prod = Cycle::basis(ring, c).mul(alpha)?;
        for k in prod.support() {
            coeffs.set(ring.dual(c), k, prod.coeff(k).clone());
        }
    }
    Correspondence::new(ring.clone(), ring.clone(), degree, coeffs)
}

/// Pairing contraction: the correspondence whose action matrix is `action`.
///
/// Independent of [`compose`]; used as its oracle.
pub fn from_action(
    source: &Arc<ChowRing>,
    target: &Arc<ChowRing>,
    degree: i64,
    action: &Matrix,
) -> Result<Correspondence> {
    let inv = source
        .gram()
        .inverse()
        .ok_or_else(|| Error::PairingFailure { ring: source.name().to_string(), violations: 1 })?;
    // M = fᵀ G  ⇒  f = G⁻¹ Mᵀ
    let coeffs = &inv * &action.transpose();
    Correspondence::new(source.clone(), target.clone(), degree, coeffs)
}

/// `f ⊗ g : A × C → B × D`, with coefficient `f_{ab} g_{cd}` at `((a,c),(b,d))`.
pub fn tensor(
    f: &Correspondence,
    g: &Correspondence,
    source_product: &Arc<ChowRing>,
    target_product: &Arc<ChowRing>,
) -> Result<Correspondence> {
    let sp = source_product
        .factors()
        .ok_or_else(|| Error::RingMismatch(format!("{} is not a product ring", source_product.name())))?;
    let tp = target_product
        .factors()
        .ok_or_else(|| Error::RingMismatch(format!("{} is not a product ring", target_product.name())))?;
    ensure_same(&sp.left, &f.source, "tensor source (left)")?;
    ensure_same(&sp.right, &g.source, "tensor source (right)")?;
    ensure_same(&tp.left, &f.target, "tensor target (left)")?;
    ensure_same(&tp.right, &g.target, "tensor target (right)")?;
    let mut coeffs = Matrix::zeros(source_product.len(), target_product.len());
    for a in 0..f.source.len() {
        for b in 0..f.target.len() {
            let fab = f.coeffs.get(a, b);
            if fab.is_zero() {
                continue;
            }
            for c in 0..g.source.len() {
                for d in 0..g.target.len() {
                    let gcd = g.coeffs.get(c, d);
                    if !gcd.is_zero() {
                        coeffs.set(sp.cell(a, c), tp.cell(b, d), fab * gcd);
                    }
                }
            }
        }
    }
    Correspondence::new(source_product.clone(), target_product.clone(), f.degree + g.degree, coeffs)
}

/// `f_T`: the action of `Δ_T ⊗ f` on `CH^∗(T × A)`, landing in `CH^∗(T × B)`.
pub fn ambient_act(f: &Correspondence, c: &Cycle, target_product: &Arc<ChowRing>) -> Result<Cycle> {
    let sp = c
        .ring()
        .factors()
        .ok_or_else(|| Error::RingMismatch(format!("{} is not a product ring", c.ring().name())))?;
    let t = sp.left.clone();
    let delta_t = diagonal(&t)?;
    let lifted = tensor(&delta_t, f, c.ring(), target_product)?;
    act(&lifted, c)
}

/// Matrix of `f_T` on `CH^∗(T × A)` in product-cell coordinates.
pub fn ambient_action_matrix(
    f: &Correspondence,
    source_product: &Arc<ChowRing>,
    target_product: &Arc<ChowRing>,
) -> Result<Matrix> {
    let sp = source_product
        .factors()
        .ok_or_else(|| Error::RingMismatch(format!("{} is not a product ring", source_product.name())))?;
    let delta_t = diagonal(&sp.left)?;
    Ok(tensor(&delta_t, f, source_product, target_product)?.action_matrix())
}

/// A morphism `f: A → B` given by its pullback and pushforward matrices.
///
/// `pullback` has rows indexed by cells of `A` and columns by cells of `B`
/// (column `b` is `f^∗ τ_b`); `pushforward` is `B × A` (column `a` is `f_∗ τ_a`).
#[derive(Debug, Clone)]
pub struct MorphismData {
    pub name: String,
    pub source: Arc<ChowRing>,
    pub target: Arc<ChowRing>,
    pub pullback: Matrix,
    pub pushforward: Matrix,
}

impl MorphismData {
    pub fn new(
        name: impl Into<String>,
        source: Arc<ChowRing>,
        target: Arc<ChowRing>,
        pullback: Matrix,
        pushforward: Matrix,
    ) -> Result<Self> {
        let m = MorphismData { name: name.into(), source, target, pullback, pushforward };
        m.check_grading()?;
        Ok(m)
    }

    pub fn identity(ring: &Arc<ChowRing>) -> Self {
        let id = Matrix::identity(ring.len());
        MorphismData {
            name: format!("id_{}", ring.name()),
            source: ring.clone(),
            target: ring.clone(),
            pullback: id.clone(),
            pushforward: id,
        }
    }

    /// `dim A − dim B`: `f_∗` sends `CH^p(A)` to `CH^{p − shift}(B)`.
    pub fn pushforward_shift(&self) -> i64 {
        self.source.dimension() as i64 - self.target.dimension() as i64
    }

    fn check_grading(&self) -> Result<()> {
        let (a, b) = (&self.source, &self.target);
        if self.pullback.rows() != a.len()
            || self.pullback.cols() != b.len()
            || self.pushforward.rows() != b.len()
            || self.pushforward.cols() != a.len()
        {
            return Err(Error::InvalidMorphism(format!("{}: matrix shapes do not match the rings", self.name)));
        }
        for x in 0..a.len() {
            for y in 0..b.len() {
                if !self.pullback.get(x, y).is_zero() && a.codim_of(x) != b.codim_of(y) {
                    return Err(Error::InvalidMorphism(format!(
                        "{}: pullback of {} has a term {} in the wrong codim",
                        self.name,
                        b.cell(y).label,
                        a.cell(x).label
                    )));
                }
                if !self.pushforward.get(y, x).is_zero()
                    && codim_i64(b, y) != codim_i64(a, x) - self.pushforward_shift()
                {
                    return Err(Error::InvalidMorphism(format!(
                        "{}: pushforward of {} has a term {} in the wrong codim",
                        self.name,
                        a.cell(x).label,
                        b.cell(y).label
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn pull(&self, b: &Cycle) -> Result<Cycle> {
        ensure_same(&self.target, b.ring(), "pullback")?;
        Cycle::from_coeffs(&self.source, b.mode(), self.pullback.apply(b.coeffs()))
    }

    pub fn push(&self, a: &Cycle) -> Result<Cycle> {
        ensure_same(&self.source, a.ring(), "pushforward")?;
        Cycle::from_coeffs(&self.target, a.mode(), self.pushforward.apply(a.coeffs()))
    }

    /// Projection formula and adjointness on all basis pairs; returns the
    /// list of violations.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let (a, b) = (&self.source, &self.target);
        for x in 0..a.len() {
            let ax = Cycle::basis(a, x);
            let fx = self.push(&ax).expect("same ring");
            for y in 0..b.len() {
                let by = Cycle::basis(b, y);
                let pulled = self.pull(&by).expect("same ring");
                let lhs = self.push(&ax.mul(&pulled).expect("same ring")).expect("same ring");
                let rhs = fx.mul(&by).expect("same ring");
                if lhs != rhs {
                    out.push(format!("projection formula fails for ({}, {})", a.cell(x).label, b.cell(y).label));
                }
                if fx.mul(&by).expect("same ring").degree() != ax.mul(&pulled).expect("same ring").degree() {
                    out.push(format!("adjointness fails for ({}, {})", a.cell(x).label, b.cell(y).label));
                }
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        match self.violations().first() {
            None => Ok(()),
            Some(v) => Err(Error::InvalidMorphism(format!("{}: {v}", self.name))),
        }
    }
}

/// The pair `(c(f), c(f)^t)`: `c(f): B → A` acts as `f^∗` and
/// `c(f)^t: A → B` acts as `f_∗`. The graph is `Σ_b f^∗(τ_{dual b}) × τ_b`.
pub fn graph_from_morphism(m: &MorphismData) -> Result<(Correspondence, Correspondence)> {
    m.validate()?;
    let (a, b) = (&m.source, &m.target);
    require_pairing(a)?;
    require_pairing(b)?;
    let mut coeffs = Matrix::zeros(a.len(), b.len());
    for y in 0..b.len() {
        let dy = b.dual(y);
        for x in 0..a.len() {
            coeffs.set(x, y, m.pullback.get(x, dy).clone());
        }
    }
    let degree = b.dimension() as i64 - a.dimension() as i64;
    let c_t = Correspondence::new(a.clone(), b.clone(), degree, coeffs)?;
    let c = transpose(&c_t);
    if c.action_matrix() != m.pullback || c_t.action_matrix() != m.pushforward {
        return Err(Error::InvalidMorphism(format!("{}: graph does not reproduce the matrices", m.name)));
    }
    Ok((c, c_t))
}

/// `(id_X × f)^∗ φ` for `φ: X → Y`, `f: W → Y`; the result is `X → W`.
pub fn pullback_second(phi: &Correspondence, f: &MorphismData) -> Result<Correspondence> {
    ensure_same(&phi.target, &f.target, "pullback along second factor")?;
    let coeffs = &phi.coeffs * &f.pullback.transpose();
    Correspondence::new(phi.source.clone(), f.source.clone(), phi.degree, coeffs)
}

/// `(id_X × g)_∗ φ` for `φ: X → Y`, `g: Y → Z`; the result is `X → Z`.
pub fn pushforward_second(phi: &Correspondence, g: &MorphismData) -> Result<Correspondence> {
    ensure_same(&phi.target, &g.source, "pushforward along second factor")?;
    let coeffs = &phi.coeffs * &g.pushforward.transpose();
    let degree = phi.degree - g.pushforward_shift();
    Correspondence::new(phi.source.clone(), g.target.clone(), degree, coeffs)
}

/// `(f × id_Z)_∗ τ` for `τ: X → Z`, `f: X → Y`; the result is `Y → Z`.
pub fn pushforward_first(tau: &Correspondence, f: &MorphismData) -> Result<Correspondence> {
    ensure_same(&tau.source, &f.source, "pushforward along first factor")?;
    let coeffs = &f.pushforward * &tau.coeffs;
    Correspondence::new(f.target.clone(), tau.target.clone(), tau.degree, coeffs)
}

/// `(f × id_Z)^∗ ψ` for `ψ: Y → Z`, `f: X → Y`; the result is `X → Z`.
pub fn pullback_first(psi: &Correspondence, f: &MorphismData) -> Result<Correspondence> {
    ensure_same(&psi.source, &f.target, "pullback along first factor")?;
    let coeffs = &f.pullback * &psi.coeffs;
    let degree = psi.degree + f.target.dimension() as i64 - f.source.dimension() as i64;
    Correspondence::new(f.source.clone(), psi.target.clone(), degree, coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{grassmannian, morphisms, projective_space};
    use crate::matrix::q;
    use crate::ring::kunneth_product;

    #[test]
    fn diagonal_of_p1_and_point() {
        let p1 = projective_space(1);
        let d = diagonal(&p1).unwrap();
        let prod = kunneth_product(&p1, &p1);
        let expected = Cycle::from_labels(&prod, &[("h⊗1", 1), ("1⊗h", 1)]).unwrap();
        assert_eq!(d.to_cycle(&prod).unwrap(), expected);

        let pt = projective_space(0);
        let d = diagonal(&pt).unwrap();
        assert_eq!(d.coeffs(), &Matrix::identity(1));
    }

    #[test]
    fn diagonal_of_gr24_has_six_terms() {
        let g = grassmannian(2, 4).unwrap();
        let d = diagonal(&g).unwrap();
        let terms = (0..6).flat_map(|a| (0..6).map(move |b| (a, b))).filter(|&(a, b)| !d.coeffs().get(a, b).is_zero());
        assert_eq!(terms.count(), 6);
        assert_eq!(transpose(&d), d);
    }

    #[test]
    fn fiber_projector_action_on_p2() {
        let p2 = projective_space(2);
        // p_{1,1} = τ_{1,1} × τ_{1,1}
        let mut coeffs = Matrix::zeros(3, 3);
        coeffs.set(1, 1, q(1));
        let p = Correspondence::new(p2.clone(), p2.clone(), 0, coeffs).unwrap();
        let a = Cycle::from_labels(&p2, &[("h", 3), ("h^2", 5)]).unwrap();
        assert_eq!(act(&p, &a).unwrap(), Cycle::from_labels(&p2, &[("h", 3)]).unwrap());
    }

    #[test]
    fn transpose_of_external_product_swaps_factors() {
        let p2 = projective_space(2);
        let mut coeffs = Matrix::zeros(3, 3);
        coeffs.set(2, 0, q(1)); // τ_{2,1} × τ_{0,1}
        let f = Correspondence::new(p2.clone(), p2.clone(), 0, coeffs).unwrap();
        let t = transpose(&f);
        assert_eq!(t.coeffs().get(0, 2), &q(1));
        assert_eq!(transpose(&t), f);
    }

    #[test]
    fn inhomogeneous_rejected() {
        let p1 = projective_space(1);
        let mut coeffs = Matrix::zeros(2, 2);
        coeffs.set(0, 0, q(1));
        coeffs.set(1, 0, q(1));
        assert!(matches!(Correspondence::new(p1.clone(), p1, 0, coeffs), Err(Error::NotHomogeneous(_))));
    }

    #[test]
    fn compose_ring_mismatch() {
        let p1 = projective_space(1);
        let p2 = projective_space(2);
        let f = diagonal(&p1).unwrap();
        let g = diagonal(&p2).unwrap();
        assert!(compose(&g, &f).is_err());
    }

    #[test]
    fn constant_map_to_point() {
        let p1 = projective_space(1);
        let m = morphisms::constant_to_point(&p1);
        let (_, c_t) = graph_from_morphism(&m).unwrap();
        assert!(act(&c_t, &Cycle::unit(&p1)).unwrap().is_zero());
        assert_eq!(act(&c_t, &Cycle::point(&p1)).unwrap(), Cycle::unit(c_t.target()));
    }

    #[test]
    fn identity_morphism_graph_is_diagonal() {
        let g = grassmannian(2, 4).unwrap();
        let (c, c_t) = graph_from_morphism(&MorphismData::identity(&g)).unwrap();
        let d = diagonal(&g).unwrap();
        assert_eq!(c, d);
        assert_eq!(c_t, d);
    }

    #[test]
    fn projection_graph_matches_matrices() {
        let p1 = projective_space(1);
        let m = morphisms::first_projection(&p1, &p1);
        let (c, c_t) = graph_from_morphism(&m).unwrap();
        // c_t ∘ c acts as f_∗ f^∗, which is zero since the fiber has positive dimension
        let both = compose(&c_t, &c).unwrap();
        assert_eq!(both.action_matrix(), &m.pushforward * &m.pullback);
        assert!(both.is_zero());
    }

    #[test]
    fn bad_morphism_rejected() {
        let p1 = projective_space(1);
        let p2 = projective_space(2);
        let mut m = morphisms::curve_in_projective_space(&p1, &p2, 2);
        // break the projection formula: f_∗(pt) = 2 pt
        m.pushforward.set(2, 1, q(2));
        assert!(m.validate().is_err());
        assert!(graph_from_morphism(&m).is_err());
    }
}
