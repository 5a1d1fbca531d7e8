//! Exact quantum Schubert calculus on projective spaces and Grassmannians,
//! the commutator-length and stable-norm bounds it feeds, and a numeric
//! det² rotation quasimorphism on paths in `Sp(2n, ℝ)`.

pub mod cl_bounds;
pub mod partitions;
pub mod qh_ring;
pub mod rational;
pub mod sp;
