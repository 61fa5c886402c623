//! Attractor geometry, escape-time membership, convex hulls, and numeric
//! interior-point certification for the plane family
//!
//! ```text
//! p(x) = T x + (1, 1),   m(x) = T x - (1, 1),   T = diag(gamma, lambda),
//! ```
//!
//! together with the class of power series `1 + sum a_n x^n`,
//! `a_n in {-1, 0, 1}`, that witnesses connectedness of the attractor.
//!
//! All certification in this crate is floating point with explicit margins
//! and is marked non-rigorous.

pub mod bseries;
pub mod error;
pub mod geom;
pub mod hull;
pub mod ifs;
pub mod raster;
pub mod render;
pub mod roots;
pub mod screen;
pub mod traps;

pub use error::{Error, Result};
pub use geom::PlanePoint;
pub use ifs::{Letter, Params, SignedWord};
