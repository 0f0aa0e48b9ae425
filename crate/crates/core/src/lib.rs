//! Complex trees: the self-similar sets generated by the maps
//! `f_j(z) = 1 + c_j z` and the parameter-space sets of their one-parameter
//! families.
//!
//! The crate is organised bottom-up:
//!
//! * [`tree`]: alphabets, words, the geometric map `phi`, similarity maps,
//!   shift dynamics and post-critical sets.
//! * [`poly`] and [`family`]: complex polynomials, rational functions and
//!   parametric families `T{c_1(z), .., c_n(z)}` with a preset catalog.
//! * [`roots`]: simultaneous polynomial root finding and algebraic point
//!   clouds of the unstable and root connectivity sets.
//! * [`connectivity`]: bounding-disk covers, disconnection certificates,
//!   letter graphs, escape tests, overlap localization, dendrite checks.
//! * [`dimension`]: similarity dimension and the `sum |c_j|^2 > 1` region.
//! * [`render`]: rasterization, parameter scans and PPM/CSV/JSON writers.
//! * [`parse`]: the plain-text syntax for words, relations and complex
//!   literals.

pub mod connectivity;
pub mod dimension;
mod error;
pub mod family;
pub mod parse;
pub mod poly;
pub mod render;
pub mod roots;
pub mod tree;
mod union_find;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use tree::{Alphabet, EpWord, FiniteWord, Relation, Similarity};

/// Default tolerance for numerically certifying a tip-to-tip relation.
pub const DEFAULT_RELATION_TOL: f64 = 1e-9;
