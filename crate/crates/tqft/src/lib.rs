//! A desk-scale workbench for 2d topological quantum field theory:
//! cobordisms as terms over the six generating surfaces, quantization
//! as a monoidal functor, and finite gauge fields as spans of action
//! groupoids composed by weak pullback.
//!
//! Three independent routes compute every closed invariant:
//! counting homomorphisms from the fundamental group ([`manifold`]),
//! evaluating in the center of a group algebra ([`frobenius`]), and
//! degroupoidifying a span of field groupoids ([`span`]). All
//! arithmetic is exact rational, so the routes are compared with
//! equality, not tolerances.

pub mod cob;
pub mod error;
pub mod frobenius;
pub mod group;
pub mod linalg;
pub mod manifold;
pub mod span;

pub use cob::{equal, normalize, CobTerm, Gen, NormalForm};
pub use error::{Error, Result};
pub use frobenius::{center_of_group_algebra, evaluate, FrobeniusAlgebra};
pub use group::{conjugacy_classes, hom_count, FiniteGroup, GroupPresentation};
pub use linalg::{LinearMap, Matrix, Q};
pub use manifold::{invariant, oracle_report, ManifoldSpec};
pub use span::{degroupoidify, quantize, GroupCtx, GroupoidSpan};
