//! Limit sets of geometrically finite Kleinian groups.
//!
//! The crate provides exact Möbius/cap geometry on the sphere at infinity,
//! marked groups with peripheral structure, a brute-force limit-set sampler,
//! a cap automaton with a property verifier and nested-path refiner, finite
//! truncations of the classical convergence notions (Chabauty, strong,
//! relative strong, peripheral stability), and sampled Cannon-Thurston maps
//! between limit sets of deformation families.

pub mod sphere;
pub mod moebius;
pub mod group;
pub mod limitset;
pub mod convergence;

pub use moebius::{matrix_distance, Moebius};
pub use sphere::{boundary_distance, BoundaryPoint, SphericalCap};
