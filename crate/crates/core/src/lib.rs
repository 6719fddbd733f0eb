//! Deterministic simulator for language generation and identification in the
//! limit, under full and partial adversarial enumeration.
//!
//! Every language is an ultimately periodic subset of ℕ ([`UPSet`]), so
//! infinitude, inclusion and density questions are all exact.

pub mod adversary;
pub mod chain;
pub mod density;
pub mod engine;
pub mod error;
pub mod family;
pub mod learner;
mod fenwick;
pub mod points;
pub mod scenario;
pub mod topology;
pub mod upset;

pub use error::{Error, Result};
pub use family::{Family, Param, Schema, Seen, Slot};
pub use points::SortedPoints;
pub use upset::{Rational, SetOp, UPSet};
