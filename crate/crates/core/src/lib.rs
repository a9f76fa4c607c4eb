//! Exact symbolic-numeric analysis of multistationarity in polynomial
//! reaction-network models.
//!
//! The pipeline: parse a model, extract conservation laws, assemble the
//! steady-state system, eliminate a maximum independent set of the
//! dependency graph, then count certified positive steady states over a
//! parameter grid.

pub mod algebra;
pub mod model;
pub mod reduction;
pub mod counter;
pub mod scan;
pub mod cli;
