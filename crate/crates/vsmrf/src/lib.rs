//! Structure learning for vector-space Markov random fields (VS-MRFs).
//!
//! A VS-MRF is a pairwise undirected graphical model over heterogeneous
//! vector-valued variables: each node carries a minimal exponential family
//! with a vector of sufficient statistics, and edges couple those statistic
//! vectors through per-pair weight matrices. This crate provides:
//!
//! - [`expfam`]: the family catalog (Bernoulli, Gaussian, gamma, Dirichlet,
//!   categorical, and point-inflated wrappers) with log-partitions,
//!   derivatives, and direct sampling;
//! - [`model`]: the joint parameterization, node-conditional natural
//!   parameters, and the per-node parameter layout used by the solver;
//! - [`sampler`]: random ground-truth model generation and Gibbs sampling;
//! - [`solver`]: per-node pseudo-likelihood M-estimation with a sparse group
//!   lasso penalty, solved by ADMM with Newton inner updates;
//! - [`stitcher`]: AND/OR assembly of per-node fits into an undirected graph,
//!   edge ranking, and DOT/GraphML export;
//! - [`diagnostics`]: TPR/FPR/ROC evaluation against a known truth and
//!   numerical checks of the sparsistency conditions;
//! - [`cli`]: the `vsmrf` command-line pipeline and its file formats.
//!
//! See the crate examples for one runnable program per capability.

pub mod cli;
pub mod data;
pub mod diagnostics;
pub mod error;
pub mod expfam;
pub mod model;
pub mod sampler;
pub mod solver;
pub mod stitcher;

pub use data::Dataset;
pub use error::{Error, Result};
pub use expfam::{Family, InflationPoint, NaturalParams};
pub use model::{GraphSchema, JointModel, NodeParamVector};
