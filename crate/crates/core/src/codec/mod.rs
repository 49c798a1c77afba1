//! Key encoding by repeated dictionary lookup, and the matching decoder.

mod bitbuf;
mod decoder;
mod encoder;

pub use bitbuf::BitBuffer;
pub use decoder::{decode, Decoder};
pub use encoder::Encoder;
