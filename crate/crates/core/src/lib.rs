//! Numerical semigroups: enumeration by Frobenius number and by genus,
//! the `(Y, Z)` classification of depth-3 semigroups, the distribution of
//! `n(S)`, Fibonacci-type bounds by genus, and MED counts.

pub mod classify;
pub mod distribution;
pub mod enumerate;
mod error;
pub mod genus_analytics;
pub mod med;
mod semigroup;
mod smallset;
pub mod util;

pub use classify::{ClassKey, Parity, YZ};
pub use enumerate::{EnumConfig, FrobeniusCensus, GenusCensus};
pub use error::{Error, Result};
pub use genus_analytics::TypeKA;
pub use semigroup::{InvariantProfile, Semigroup};
pub use smallset::SmallSet;
