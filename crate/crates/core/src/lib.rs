//! Exact 2+1-separately-convex hulls of finite point sets in `R³`.
//!
//! Space is split as `R² ⊕ R`: a point is a planar part `xy` and a height
//! `z`. The hull of a finite `K` is computed by [`hull::Hull::compute`],
//! which builds the first-order grid of `K` ([`grid`]), eliminates
//! finitely extremal grid points not in `K`, and returns the hv-complex of
//! what survives. [`pcpp`] gives a shovel-based outer approximation and
//! [`verify`] ties the two together.
//!
//! All arithmetic is exact ([`kernel::Rational`]).

pub mod document;
pub mod error;
pub mod grid;
pub mod hull;
pub mod kernel;
pub mod mesh;
pub mod pcpp;
mod peel;
pub mod verify;

pub use error::{DocumentError, HullError};
pub use grid::Grid;
pub use hull::{
    complex_extremal_points, eliminate, finitely_extremal, hv_hull, membership, scaffolding, ActiveSet,
    EliminationTrace, HvComplex, Hull, Strategy,
};
pub use kernel::{ConvexPolygon, Point2, Point3, Rank, Rational};
pub use pcpp::{pcpp_member, PcppVerdict, Shovel};
pub use verify::{verify_hull, VerificationReport};
