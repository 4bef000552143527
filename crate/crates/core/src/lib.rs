//! Geometric centers as equivariant maps under the Euclidean group `E(n)`.
//!
//! The crate works with simplices given as `n + 1` points of `R^n` (coincident
//! vertices allowed) and provides:
//!
//! - [`geometry`]: points, isometries, the group operations and distance matrices;
//! - [`simplex`]: facets, point-set congruence, affine independence, equifacetality;
//! - [`symmetry`]: rigid registration, stabilizers and their fixed-point subspaces;
//! - [`centers`]: concrete centers (centroid, h-weighted, triangle centers, conic
//!   center) and the orbit-transport construction that realizes any point fixed
//!   by a simplex's symmetry group as the value of some equivariant center;
//! - [`harness`]: instance generators, coincidence reports for equifacetal
//!   simplices and non-coincidence certificates for all others.
//!
//! Everything here is `no_std` (with `alloc`). File formats, reports and the
//! command-line front end live in the `eqcenter` crate.

#![no_std]
#![allow(clippy::needless_range_loop)]

extern crate alloc;

pub mod centers;
mod error;
pub mod geometry;
pub mod harness;
mod linalg;
pub mod simplex;
pub mod symmetry;
mod tolerance;

pub use centers::{CenterFunction, Conic, OrbitCenter, TriangleCenter};
pub use error::{Error, Result};
pub use geometry::{Isometry, Point};
pub use simplex::{Correspondence, Simplex};
pub use symmetry::{AffineSubspace, SymmetryElement, SymmetryGroup};
pub use tolerance::{Tolerance, NULL_SPACE_REL, ORTHOGONALITY};
