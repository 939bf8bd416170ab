//! Rigid-panel kirigami models of one-DOF radial polyhedral transformations.
//!
//! The crate builds convex solids, generates cut-and-crease patterns whose
//! panels fold the solid radially into a smaller one, certifies the motion
//! numerically through the rank of the hinge constraint Jacobian, and traces
//! the folding path between the deployed and folded states.

pub mod error;
pub mod geom;
pub mod linalg;
pub mod patterngen;
pub mod rigidkin;
pub mod solids;
pub mod transforms;

pub use error::{KirigamiError, Result};
pub use geom::Placement;
pub use solids::{build_polyhedron, Polyhedron, SolidId};
