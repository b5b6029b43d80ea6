//! Finite fields GF(p^h), polynomials over them, embeddings and splitting fields.

mod embed;
mod field;
mod poly;
pub(crate) mod zp;

pub use embed::{split_degree, splitting_field, Embedding, SplitOptions, Splitting, MAX_SPLIT_DEGREE};
pub use field::{Elem, Field, FieldElement, HARD_FIELD_LIMIT};
pub use poly::Poly;
