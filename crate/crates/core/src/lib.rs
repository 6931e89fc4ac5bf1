//! Wave scattering and spectra on networks of thin fibers.
//!
//! As the fiber width `eps` shrinks, the problem reduces to a quantum graph
//! whose vertex conditions come from small junction problems. The crate
//! builds those vertex conditions ([`vertex`]) from per-end scattering data
//! ([`edge`]), assembles whole-graph scattering and eigenvalue problems
//! ([`solver`]), and examines the threshold behaviour of junctions ([`lowk`]).
// NaN-rejecting checks are written as negated comparisons on purpose
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod edge;
pub mod error;
pub mod graph;
pub mod io;
pub mod linalg;
pub mod lowk;
pub mod phase;
pub mod potential;
pub mod profile;
pub mod solver;
pub mod vertex;
