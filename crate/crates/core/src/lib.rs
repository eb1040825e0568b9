//! Finite simplicial sets with marking.
//!
//! Simplicial bookkeeping ([`delta`], [`sset`]), markings and the Gray
//! tensor products ([`marking`]), anodyne extensions and lifting checks
//! ([`anodyne`]), the certified filtration of `Δ^ℓ[3]_♯ ⊗ Δ[m]`
//! ([`filtration`]) and corpus-wide property suites ([`harness`]).

pub mod anodyne;
pub mod delta;
pub mod error;
pub mod filtration;
pub mod harness;
pub mod marking;
#[cfg(feature = "oracles")]
pub mod oracle;
pub mod sset;

pub use error::{Error, Result};
