//! Superextensions of finite groups.
//!
//! The superextension of a group `X` is the set of maximal linked systems on
//! `X` with the product extending the group operation. This crate
//! enumerates those systems, builds their composition tables, analyzes the
//! resulting semigroups and checks non-centrality certificates on ground
//! sets too large to enumerate.

pub mod algebra;
pub mod analysis;
pub mod checkers;
pub mod error;
pub mod hyperspace;
pub mod oracle;
pub mod subset;
pub mod suite;
pub mod superext;

pub use algebra::{parse_spec, CayleyTable, FiniteSemigroup};
pub use error::{Error, Result};
pub use hyperspace::{MaximalLinkedSystem, SetFamily};
pub use subset::Subset;
pub use superext::{lambda_table, product, LambdaTable};
