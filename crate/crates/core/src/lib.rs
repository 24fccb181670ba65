//! Exact combinatorial machinery for deciding coarse-median and cocompact
//! cubulation status from finite input.
//!
//! The crate has four analysis layers:
//!
//! * [`median`] — finite median algebras: axiom verification, intervals,
//!   hulls, walls, rank by two independent routes, and the executable
//!   identities behind the hull-of-ball bound and the diagonal five-point
//!   computation.
//! * [`rbf`] — richly-branching-flat data: validity checks, direction data
//!   derived from tubular and free-by-cyclic witnesses, and a small discrete
//!   model builder.
//! * [`tubular`] — tubular groups (finite graphs of Z^2 vertices and Z
//!   edges): distortion detection on the transport graph with exact rational
//!   labels, Dehn-function classification, and the full verdict.
//! * [`fbc`] — free-by-cyclic groups presented by declared relative
//!   train-track data: validation and the linearity-based classification.
//!
//! All arithmetic is exact; no floating point is used anywhere.

pub mod error;
pub mod fbc;
pub mod fixtures;
pub mod limits;
pub mod median;
pub mod rational;
pub mod rbf;
pub mod report;
pub mod tubular;

pub use error::{Error, Result};
pub use limits::Limits;
