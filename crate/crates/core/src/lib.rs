pub mod baseline;
pub mod cli;
pub mod compare;
pub mod encoding;
pub mod error;
pub mod fit;
pub mod fixtures;
pub mod graph;
pub mod matrix;
pub mod numerics;
pub mod sylvester;
pub mod verify;
pub mod wgwa;

pub use error::{Error, Result};
pub use matrix::DenseMatrix;
