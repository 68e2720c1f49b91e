//! Exact computations with plane birational maps.
//!
//! The crate is organised in layers: [`exactalg`] provides polynomials and
//! exact linear algebra, [`cremona`] builds birational maps on top of it,
//! [`oscillate`] and [`stability`] construct maps with prescribed degree
//! behaviour, and [`halphen`] works in the lattice `Z^{1,9}`. The [`cli`]
//! module drives everything from JSON.

pub mod cli;
pub mod cremona;
pub mod error;
pub mod exactalg;
pub mod halphen;
pub mod oscillate;
pub mod rng;
pub mod stability;

pub use error::{Error, Result};

/// Library version embedded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
