//! Primitive monoids of finite labelled posets, the constructions that build
//! them from smaller pieces, graph monoids of quivers, and an exact
//! rewriting engine with a matching operator representation for the
//! associated algebra.

pub(crate) mod dsl;
pub mod error;
pub mod poset;
pub mod primon;
pub mod constructions;
pub mod graphmon;
pub mod catalogue;
pub mod poly;
pub mod leavitt;
pub mod toeplitz;

pub use error::{Error, Result};
