//! Hybrid finite-domain / continuous constraint solver.
//!
//! Integer variables are propagated by classic finite-domain propagators;
//! continuous (in)equations are delegated, one function at a time, to HC4
//! contractors through the narrow [`contractor::ContractorRegistry::contract`]
//! call, which takes and returns a flat array of bounds.

pub mod batch;
pub mod contractor;
pub mod engine;
pub mod expr;
pub mod fd;
pub mod interval;
pub mod model;
pub mod real;
pub mod search;
pub mod store;

pub use contractor::{ContractStatus, ContractorRegistry};
pub use interval::Interval;
pub use model::{Model, ModelError};
pub use real::RealTerm;
pub use search::{Objective, SearchConfig, SearchEvent, Solution, Solver};
pub use store::{IntVar, RealVar};
