//! Seeded random inputs for property checks.

use std::sync::Arc;

use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::catalog::{morphisms, projective_space};
use crate::correspondence::{Correspondence, MorphismData};
use crate::fibration::{FibrationModel, YCycle};
use crate::matrix::{q, Matrix};
use crate::ring::{ChowRing, CoeffMode, Cycle};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn coeff(rng: &mut SeededRng, bound: i64) -> BigRational {
    q(rng.gen_range(-bound..=bound))
}

/// Random integer cycle; homogeneous of `codim` when given.
pub fn random_cycle(ring: &Arc<ChowRing>, codim: Option<usize>, bound: i64, rng: &mut SeededRng) -> Cycle {
    let coeffs = (0..ring.len())
        .map(|c| if codim.is_none_or(|p| ring.codim_of(c) == p) { coeff(rng, bound) } else { q(0) })
        .collect();
    Cycle::from_coeffs(ring, CoeffMode::Integer, coeffs).expect("integral coefficients")
}

/// A random codim for `ring`.
pub fn random_codim(ring: &ChowRing, rng: &mut SeededRng) -> usize {
    rng.gen_range(0..=ring.dimension())
}

/// Random YCycle; homogeneous of `codim` when given.
pub fn random_ycycle(model: &Arc<FibrationModel>, codim: Option<usize>, bound: i64, rng: &mut SeededRng) -> YCycle {
    let coeffs = (0..model.len())
        .map(|c| if codim.is_none_or(|p| model.codim_of(c) == p) { coeff(rng, bound) } else { q(0) })
        .collect();
    YCycle::from_coords(model, coeffs).expect("length")
}

/// Random degree-`degree` correspondence `A → B`.
pub fn random_correspondence(
    a: &Arc<ChowRing>,
    b: &Arc<ChowRing>,
    degree: i64,
    bound: i64,
    rng: &mut SeededRng,
) -> Correspondence {
    let codim = a.dimension() as i64 + degree;
    let coeffs = Matrix::from_fn(a.len(), b.len(), |x, y| {
        if (a.codim_of(x) + b.codim_of(y)) as i64 == codim {
            coeff(rng, bound)
        } else {
            q(0)
        }
    });
    Correspondence::new(a.clone(), b.clone(), degree, coeffs).expect("homogeneous by construction")
}

/// A degree with at least one possible nonzero term for `A → B`.
pub fn random_degree(a: &ChowRing, b: &ChowRing, rng: &mut SeededRng) -> i64 {
    let lo = -(a.dimension() as i64);
    let hi = b.dimension() as i64;
    rng.gen_range(lo..=hi)
}

/// A catalog morphism `X → Y` for `X, Y ∈ {P^1, P^2}`.
pub fn random_morphism(x: &Arc<ChowRing>, y: &Arc<ChowRing>, rng: &mut SeededRng) -> MorphismData {
    let e = rng.gen_range(1..=4);
    let mut options = vec![morphisms::constant_map(x, y)];
    match (x.dimension(), y.dimension()) {
        (1, 1) | (2, 2) => {
            options.push(morphisms::power_map(x, e));
            options.push(MorphismData::identity(x));
        }
        (1, n) if n > 1 => {
            options.push(morphisms::curve_in_projective_space(x, y, e));
            options.push(morphisms::linear_embedding(x, y));
        }
        _ => {}
    }
    options.swap_remove(rng.gen_range(0..options.len()))
}

/// `P^1` or `P^2`.
pub fn random_small_space(rng: &mut SeededRng) -> Arc<ChowRing> {
    projective_space(*[1usize, 2].choose(rng).expect("nonempty"))
}
