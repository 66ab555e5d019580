pub mod checks;
pub mod corestriction;
pub mod error;
pub mod exactnum;
pub mod fek;
pub mod kuga;
pub mod quaternion;

pub use error::{Error, Result};

/// Schema tag carried by every JSON document.
pub const SCHEMA: &str = "kuga-forge/1";
