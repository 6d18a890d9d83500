//! Exact integral Khovanov homology of braid closures.
//!
//! The chain complex is generated by enhanced Kauffman states of the closed
//! braid diagram and graded by `(a, b) = (σ, σ + 2τ)`; the differential flips
//! one `A` marker to `B` at a time. Homology is computed exactly over the
//! integers with Gaussian cancellation followed by Smith normal form, so the
//! torsion subgroups (the interesting part) come out as invariant factors.
//!
//! Module map:
//!
//! * [`braid`]: braid words, named families and closure.
//! * [`diagram`]: link diagrams, Kauffman states, smoothing into circles.
//! * [`complex`]: enhanced states, incidence numbers, the bigraded complex.
//! * [`algebra`]: exact integers, sparse matrices, Smith form, reduction.
//! * [`homology`]: homology tables in framed and classical gradings.
//! * [`polynomial`]: Kauffman bracket and graded Euler characteristic.
//! * [`families`]: registry of the published braids with expected torsion.
//! * [`expr`]: the braid-expression mini-language.

pub mod algebra;
pub mod braid;
pub mod budget;
pub mod complex;
pub mod diagram;
pub mod error;
pub mod expr;
pub mod families;
pub mod homology;
pub mod polynomial;

mod par;

pub use braid::{BraidPermutation, BraidWord};
pub use complex::{BigradedComplex, Bigrading, EnhancedState};
pub use diagram::{KauffmanState, LinkDiagram};
pub use error::{Error, Result};
pub use homology::{ComputeOptions, GradingMode, HomologyGroup, HomologyTable};
pub use polynomial::LaurentPoly;
