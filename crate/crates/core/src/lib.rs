//! Topological indices of pairs of almost commuting unitary matrices: the
//! winding number ω, the Bott index κ, the Pfaffian-Bott index κ₂ and the
//! bounds that certify them.

pub mod bott;
pub mod bounds;
pub mod error;
pub mod generators;
pub mod linalg;
pub mod logmethod;
pub mod quadrature;
pub mod selfdual;
pub mod winding;

pub use error::{Error, Result};
