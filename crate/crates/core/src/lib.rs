pub mod algebra;
pub mod kodaira;
pub mod lattice;
pub mod modular;
pub mod construction;
pub mod isotrivial;
pub mod catalog;
pub mod verify;
pub mod error;

pub use error::{Error, Result};
