//! Cauchy singular integrals on weighted variable-exponent Lebesgue spaces
//! over Carleson curves: curve geometry, weights and norms, submultiplicative
//! indices, boundedness and Fredholm decisions for `aP + bQ`, numerical
//! corroboration, and a batch command line.
//!
//! Curves are sampled by arclength; every sup or limit is taken on explicit
//! grids, and strict inequalities come back as three-valued verdicts.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod curve;
pub mod error;
pub mod fredholm;
pub mod indices;
pub mod lab;
pub mod spaces;

pub use error::{Error, Result};
