//! Likelihood-ratio algebra and population simulation for assessing
//! multi-gene genetic risk tests.
//!
//! - [`risk_math`]: posterior risk, likelihood-ratio products, and exact
//!   disease-by-genotype tables for binary and three-genotype gene models.
//! - [`population_sim`]: seeded population simulators (risk-drives-status and
//!   status-drives-genotype procedures) and the population file format.
//! - [`evaluation`]: confusion measures, ROC/AUC, prevalence drift, and the
//!   genes-needed-for-PPV search.
//! - [`case_control`]: case-control sampling, logistic regression by IRLS,
//!   and likelihood-ratio estimation with Wald intervals.
//! - [`experiments`]: the table/figure reproductions behind `riskgene-sim`.
//!
//! Runnable walkthroughs live in `examples/`; see the README.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod case_control;
pub mod error;
pub mod evaluation;
pub mod experiments;
pub mod population_sim;
pub mod risk_math;
pub mod rng;

pub use error::{Error, Result};
