//! Exact convex geometry on shape coordinates.
//!
//! Points are kept in full probability coordinates; the simplex LP absorbs
//! the affine dependence between them. Only [`project_2d`] drops a
//! coordinate, and only for plotting and planar cross-checks.

mod hull2d;
mod lp;
mod polytope;

pub use hull2d::{convex_hull_2d, orientation};
pub use lp::{Constraint, FarkasCertificate, LinearProgram, LpOutcome, Relation};
pub use polytope::{
    affine_rank, certify_vertices, contains_polytope, ex_polytope, ex_polytope_with,
    face_restrict, membership, membership_program, project_2d, Containment, PointSet, Polytope,
};
