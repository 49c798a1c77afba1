pub mod assign;
pub mod axis;
pub mod bench;
pub mod codec;
pub mod corpus;
pub mod dict;
pub mod error;
pub mod format;
pub mod index;
pub mod keyfile;
pub mod model;
pub mod pipeline;
pub mod select;
pub mod validate;

pub use error::{Error, Result};
pub use model::{Alphabet, BoundaryString, ByteKey, CodeWord, DictEntry, Dictionary, EncodedKey, Scheme};
