//! Command-line front end for `hyperstep`: potential and transmission
//! tables as CSV, wavefunction dumps and the verification suite.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod app;
pub mod commands;
pub mod config;
pub mod csv;
pub mod verify;

pub use commands::{potential_table, sweep_table, wavefunction_table, SweepOutput, SweepSpec, Variable};
pub use csv::Table;
