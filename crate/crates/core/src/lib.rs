//! Fusion rings, Temperley-Lieb realizations and rapid-decay checks for discrete quantum groups.

pub mod error;
pub mod fusion;
pub mod grouporacle;
pub mod length;
pub mod rdcheck;
pub mod linalg;
pub mod tlrep;
pub mod transform;

pub use error::{QgrdError, Result};
