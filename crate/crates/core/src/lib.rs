pub mod error;
pub mod fock;
pub mod numeric;
pub mod quantize;
pub mod random;
pub mod symalg;
pub mod symmaps;
pub mod twisted;

pub use error::{Error, Result};
