pub mod blocks;
pub mod channel;
pub mod codec;
pub mod dup;
pub mod eigen;
pub mod error;
pub mod gf;
pub mod graph;
pub mod oracle;
pub mod rates;
pub mod rs;
pub mod verify;
pub mod word;

pub use error::{DecodeFailure, Error, Result};
pub use word::{Symbol, Word};
