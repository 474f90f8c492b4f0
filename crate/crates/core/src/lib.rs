//! Hyperbolic polyhedra in the hyperboloid model of H³.
//!
//! The crate covers convex projective polyhedra with finite, ideal and
//! hyperideal vertices, their duals in de Sitter space, the cone-spherical
//! metrics induced on those duals, truncation of hyperideal vertices, the
//! combinatorial membership test for exterior dihedral angles, and numerical
//! checks of the Pogorelov maps between curved and flat models.

pub mod angles;
pub mod conemetric;
pub mod duality;
pub mod error;
pub mod io;
pub mod minkowski;
pub mod pogorelov;
pub mod polyhedron;
pub mod shapes;
pub mod trunc;

pub use error::{Error, Result};
pub use minkowski::{
    classify, desitter_distance, hyperbolic_distance, inner, projective_inverse, projective_map,
    CausalClass, DSPoint, HPlane, HPoint, MVector, ProjectiveCenter, Sign,
};
