//! Numerics for Z2 x Z2-graded paraparticles, a photonic spin-orbit ququart
//! gate model and fractional-noise diagnostics.
//!
//! Each algebraic identity is exposed as a residual that can be checked, and
//! each procedure as a plain function. See `examples/` for one runnable
//! program per capability.

pub mod linalg;

pub mod grading;
pub mod para_fock;
pub mod braiding;
pub mod graded_clifford;
pub mod ququart;
pub mod spin_chain;
pub mod fracnoise;
pub mod circuit;
pub mod audit;
pub mod cli;
