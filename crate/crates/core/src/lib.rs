//! Integral points on polynomial plane curves.
//!
//! Exact rational polynomial algebra, plane automorphisms and the
//! degree-reduction that straightens a polynomial curve into a coordinate
//! line, certified counting windows for `M(p, B)`, integral points on
//! parametrised curves and Pell conics, and brute-force oracles for all of
//! them.

pub mod automorph;
pub mod corpus;
pub mod count;
pub mod curve;
mod error;
pub mod fixtures;
pub mod lattice;
pub mod pell;
pub mod poly;
pub mod reduce;

pub use automorph::{ElementaryMap, PlaneAutomorphism};
pub use count::{CountWindow, MReport};
pub use curve::{CurveSpec, FiberClass, NReport, ProjectiveParam};
pub use error::{Error, Result};
pub use pell::{CFExpansion, PellForm, PellSolution};
pub use poly::{BiPoly, PrimitiveForm, Rat, UniPoly};
pub use reduce::{PolyParam, ReductionResult};
