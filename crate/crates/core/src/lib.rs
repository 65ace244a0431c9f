#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod complexes;
pub mod corpus;
pub mod error;
pub mod grmod;
pub mod io;
pub mod koszul;
pub mod linalg;
pub mod quiver;
pub mod random;
pub mod suites;

pub use error::{Error, Result};
