//! Deterministic evolutionary games on finite graphs, treated as discrete
//! dynamical systems.
//!
//! Vertices hold one of two strategies (1 = cooperate, 0 = defect), earn
//! utility from a symmetric 2×2 game played with their neighbours, and update
//! by imitating the best performer in their closed neighbourhood. Update
//! orders decide which vertices move at each step. The [`attractor`] and
//! [`statespace`] modules enumerate the resulting finite state spaces and
//! decide attractivity exactly; [`predicates`] holds the closed-form
//! attractivity conditions for complete graphs, regular graphs and wheels, and
//! [`verify`] cross-checks them against brute force.

pub mod attractor;
pub mod config;
pub mod dynamics;
pub mod error;
pub mod game;
pub mod graph;
pub mod graph6;
pub mod parallel;
pub mod predicates;
pub mod radius;
pub mod rational;
pub mod statespace;
pub mod verify;

pub use config::Configuration;
pub use dynamics::{Game, PhaseMap, System, UpdateOrder, UpdateRule};
pub use error::{Error, Result};
pub use game::{PayoffParams, Scenario, UtilityKind};
pub use graph::Graph;
pub use parallel::Execution;
pub use rational::Rational;

/// graph6 string of the 24-vertex cubic Cayley graph of the dihedral group of
/// order 24 used as the standard regular-graph test instance.
pub const CAYLEY_D24_G6: &str = "WsOPA?OG?[?E@C?o@??@??O?????????s??k?@@_?Cg??KO";
