//! Exact modular integer and negacyclic polynomial arithmetic underlying all
//! ciphertexts. Everything here is bit-exact and deterministic; no floating
//! point.

pub mod encoding;
pub mod poly;
pub mod serial;
pub mod word;

pub use encoding::MessageEncoding;
pub use poly::ModPoly;
pub use word::TorusWord;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TorusError {
    #[error("message {m} out of range for base {base}")]
    MessageOutOfRange { m: u64, base: u64 },
    #[error("base {base} too large for torus width {width}")]
    BaseTooLarge { base: u64, width: u32 },
    #[error("polynomial shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("bad serialized data: {0}")]
    BadFormat(String),
}
