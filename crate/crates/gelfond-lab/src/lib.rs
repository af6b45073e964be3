//! gelfond-lab: exact-arithmetic machinery for polynomial heights,
//! resultant and gcd bounds, lattice partition combinatorics, and certified
//! auxiliary-polynomial construction.
//!
//! Every inequality checker produces a three-valued [`verdict::Verdict`]
//! backed by rigorous interval enclosures; exact rational claims are
//! decided exactly. See the crate examples for runnable entry points into
//! each subsystem.

pub mod error;
pub mod interval;
pub mod poly;
pub mod transforms;
pub mod verdict;

pub mod factorgcd;
pub mod resultants;

pub mod combinatorics;

pub mod auxpoly;
pub mod pipelines;

pub mod campaign;
pub mod io;

pub use error::GlError;
pub use interval::{ComplexEnclosure, RealInterval};
pub use poly::{EvalPointSet, RatPoly, RatVector};
pub use transforms::AffineMap;
pub use verdict::{Certificate, Outcome, Verdict};
