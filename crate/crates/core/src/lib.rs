//! Exact Chow rings of cellular varieties, correspondences between them, and
//! the projector families attached to locally trivial fibrations.
//!
//! All arithmetic is exact (`BigInt` / `BigRational`).

pub mod catalog;
pub mod correspondence;
pub mod error;
pub mod fibration;
pub mod identities;
pub mod io;
pub mod matrix;
pub mod motives;
pub mod murre;
pub mod random;
pub mod ring;

pub use error::{Error, Result};
