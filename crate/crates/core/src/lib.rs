//! sumprodlab: an exact-arithmetic laboratory for sum-product expander
//! estimates over finite sets of rationals.
//!
//! The crate computes the sets, energies and incidence counts of the
//! sum-product world exactly, runs constructive pigeonholing refinements
//! that emit re-verifiable certificates, and drives a verification harness
//! that checks constant-free inequalities exactly and reports implicit-
//! constant inequalities as ratio evidence over generated set families.

pub mod arith;
pub mod cli;
pub mod energy;
pub mod error;
pub mod families;
pub mod geometry;
pub mod hp;
pub mod io;
pub mod refine;
pub mod setcore;
pub mod verify;

pub use arith::Rational;
pub use error::{Error, Result};
pub use setcore::GroundSet;
