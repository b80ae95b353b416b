//! Billiards in strictly convex planar domains.
//!
//! The crate is organised around [`geometry::ConvexDomain`], an immutable
//! arc-length parametrized boundary. On top of it:
//!
//! * [`billiard_map`]: the map `(s, phi) -> (s', phi')`, chord generating
//!   function, exact differential and its expansion near the boundary;
//! * [`lazutkin`]: the Lazutkin chart and normal-form diagnostics;
//! * [`spectrum`]: Birkhoff periodic orbits, the marked length spectrum,
//!   Mather's beta and alpha functions, rotation numbers;
//! * [`integrable`]: the first integral of elliptic billiards and caustic
//!   classification;
//! * [`rigidity`]: boundary matching and the curvature obstruction that
//!   decides whether two domains are similar;
//! * [`cli`]: file-producing commands used by the `billiards` binary.

pub mod billiard_map;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod integrable;
pub mod lazutkin;
pub mod output;
pub mod quad;
pub mod rigidity;
pub mod spectrum;

pub use billiard_map::{Jacobian2, PhasePoint};
pub use error::{BilliardError, Result};
pub use geometry::{ConvexDomain, DomainKind, DomainSpec, SupportFunction};
