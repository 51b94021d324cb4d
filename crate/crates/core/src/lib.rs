//! Critical lattices, critical determinants, optimal lattice packings and
//! extremal hexagons of the planar L^p balls `D_p = { |x|^p + |y|^p ≤ 1 }` and
//! their dyadic dilates `2^m · D_p`.
//!
//! The critical determinant is given by one of two closed forms depending on
//! `p` (see [`solvers`]); [`moduli`] recomputes it by brute-force minimization
//! over the admissible lattices with three boundary contact pairs, and
//! [`verify`] runs every consistency check between the two routes.

// `!(x > 0.0)` is used deliberately so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod configuration;
pub mod direct;
pub mod domain;
pub mod error;
pub mod geometry;
pub mod hexagon;
pub mod lattice;
pub mod moduli;
pub mod numeric;
pub mod packing;
pub mod render;
pub mod solvers;
pub mod table;
pub mod verify;

pub use configuration::{CriticalConfiguration, Tolerances};
pub use domain::{classify, BallSpec, Branch, DomainClass, LatticeBasis, ModuliPoint, PackingReport};
pub use error::{Error, Result};
pub use geometry::Vec2;
pub use lattice::CriticalLatticeKind;
pub use solvers::{davis_constant, CriticalConstants};
