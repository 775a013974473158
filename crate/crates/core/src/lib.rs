//! Locally recoverable codes with all-symbol locality `r` and availability `t`.
//!
//! The crate covers exact finite-field arithmetic ([`galois`], [`linalg`]),
//! rank-metric Gabidulin codes ([`gabidulin`]), builders for subset-incidence
//! (WZL), expander-based and concatenated codes ([`constructions`]), the
//! shortening engine for distance bounds ([`shortening`]), closed-form and
//! asymptotic bounds ([`bounds`]), brute-force verification ([`analysis`]) and
//! the JSON/CSV interchange formats ([`artifact`]).

pub mod analysis;
pub mod artifact;
pub mod bounds;
pub mod constructions;
pub mod error;
pub mod gabidulin;
pub mod galois;
pub mod linalg;
pub mod shortening;

pub use error::{Error, Result};
pub use galois::{build_base_field, BaseField, ExtElement, Field, FieldTower};
pub use linalg::Matrix;
