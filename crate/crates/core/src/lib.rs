//! Combinatorial patchworking of T-curves.
//!
//! A unimodular triangulation `T` of the lattice triangle `d·Δ₂` together
//! with a sign distribution `σ` on its lattice points determines a curve in
//! the real projective plane.  This crate builds that curve combinatorially,
//! classifies its isotopy type (its real scheme), and runs censuses and
//! searches over all sign distributions of a triangulation.

pub mod catalog;
pub mod census;
pub mod document;
pub mod error;
pub mod families;
pub mod kernel;
pub mod lattice;
pub mod patchwork;
pub mod polynomial;
pub mod regularity;
pub mod scheme;
pub mod search;
pub mod signs;
pub mod surface;
pub mod svg;
pub mod triangulation;

pub use error::{Error, Result};
pub use lattice::{Point, Quadrant};
pub use patchwork::{is_bridge_flip, root_isotopic, LoopKind, Patchwork};
pub use scheme::{enumerate_schemes, harnack_bound, parse_scheme, RealScheme};
pub use signs::{class_count, SignDistribution};
pub use triangulation::Triangulation;
