//! Secrecy and reliability analysis of cellular networks with inband D2D
//! communication under probabilistic underlay/overlay mode selection and
//! orthogonal spectrum partition.
//!
//! The crate provides exact (quadrature-backed) evaluation of the secrecy
//! outage probability and average secrecy capacity of every cellular user,
//! the outage probability and average capacity of every D2D pair, a
//! slot-level Monte Carlo simulator of the same system, and solvers for the
//! joint mode-selection/spectrum-partition fairness problems.

pub mod analytic;
pub mod density;
pub mod error;
pub mod montecarlo;
pub mod network;
pub mod optimizer;
pub mod scenario;
pub mod special;
pub mod subsets;

pub use error::{Error, Result};
pub use network::{link_budget, rate_normalize, LinkBudget, NodeId, Point, RadioParams, SchemeConfig, Topology};
